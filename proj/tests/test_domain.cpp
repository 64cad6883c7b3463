#include "dnnscaler/domain.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "dnnscaler/random.hpp"

namespace dnnscaler {
namespace {

TEST(Percentile, NearestRankHundredSamples) {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<size_t>(i)] = static_cast<double>(i + 1);
  EXPECT_DOUBLE_EQ(percentile(v, 0.95), 95.0);
  EXPECT_DOUBLE_EQ(percentile(v, 0.50), 50.0);
  EXPECT_DOUBLE_EQ(percentile(v, 1.00), 100.0);
}

TEST(Percentile, SingleSample) {
  std::vector<double> v{7.0};
  EXPECT_DOUBLE_EQ(percentile(v, 0.95), 7.0);
}

TEST(Percentile, Ties) {
  std::vector<double> v{5.0, 5.0, 5.0, 5.0};
  EXPECT_DOUBLE_EQ(percentile(v, 0.95), 5.0);
}

TEST(Percentile, LowQuantileHitsMinimum) {
  std::vector<double> v{30.0, 10.0, 20.0};
  EXPECT_DOUBLE_EQ(percentile(v, 0.01), 10.0);
}

TEST(Percentile, RejectsEmptyAndBadQuantile) {
  std::vector<double> empty;
  EXPECT_THROW(percentile(empty, 0.95), std::invalid_argument);
  std::vector<double> v{1.0};
  EXPECT_THROW(percentile(v, 0.0), std::invalid_argument);
  EXPECT_THROW(percentile(v, 1.5), std::invalid_argument);
  EXPECT_THROW(percentile(v, -0.1), std::invalid_argument);
}

TEST(Percentile, ResultIsAlwaysAMember) {
  RandomStream rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + static_cast<size_t>(rng.next_u64() % 40);
    std::vector<double> v(n);
    for (auto& x : v) x = 100.0 * rng.uniform();
    const double q = 0.01 + 0.99 * rng.uniform();
    auto copy = v;
    const double p = percentile(copy, q);
    EXPECT_NE(std::find(v.begin(), v.end(), p), v.end());
  }
}

TEST(Percentile, MonotoneInQuantile) {
  RandomStream rng(99);
  std::vector<double> v(37);
  for (auto& x : v) x = 50.0 * rng.uniform();
  double prev = 0.0;
  for (double q = 0.05; q <= 1.0; q += 0.05) {
    auto copy = v;
    const double p = percentile(copy, q);
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(ThroughputImprovement, MatchesHandComputedGains) {
  EXPECT_NEAR(throughput_improvement(237.28, 118.66), 99.9662902, 1e-4);
  EXPECT_NEAR(throughput_improvement(237.28, 118.66), 99.96, 0.01);
  EXPECT_NEAR(throughput_improvement(125.67, 118.66), 5.9076353, 1e-4);
  EXPECT_NEAR(throughput_improvement(125.67, 118.66), 5.91, 0.01);
  EXPECT_DOUBLE_EQ(throughput_improvement(100.0, 100.0), 0.0);
  EXPECT_DOUBLE_EQ(throughput_improvement(50.0, 100.0), -50.0);
}

TEST(ThroughputImprovement, ScaleInvariant) {
  RandomStream rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const double base = 1.0 + 500.0 * rng.uniform();
    const double now = 1.0 + 500.0 * rng.uniform();
    const double k = 0.1 + 10.0 * rng.uniform();
    EXPECT_NEAR(throughput_improvement(now, base),
                throughput_improvement(k * now, k * base), 1e-9);
  }
}

TEST(ThroughputImprovement, RejectsNonPositiveBaseline) {
  EXPECT_THROW(throughput_improvement(10.0, 0.0), std::invalid_argument);
  EXPECT_THROW(throughput_improvement(10.0, -3.0), std::invalid_argument);
}

TEST(LatencyWindow, SlidesAndKeepsCapacity) {
  LatencyWindow w(3);
  EXPECT_EQ(w.capacity(), 3u);
  EXPECT_FALSE(w.full());
  w.push(1.0);
  w.push(2.0);
  w.push(3.0);
  EXPECT_TRUE(w.full());
  w.push(4.0);
  EXPECT_EQ(w.size(), 3u);
  const auto v = w.to_vector();
  const std::vector<double> expected{2.0, 3.0, 4.0};
  EXPECT_EQ(v, expected);
}

TEST(LatencyWindow, P95AndMean) {
  LatencyWindow w(100);
  for (int i = 1; i <= 100; ++i) w.push(static_cast<double>(i));
  EXPECT_DOUBLE_EQ(w.p95(), 95.0);
  EXPECT_DOUBLE_EQ(w.mean(), 50.5);
}

TEST(LatencyWindow, ClearEmptiesWindow) {
  LatencyWindow w(4);
  w.push(9.0);
  w.clear();
  EXPECT_EQ(w.size(), 0u);
  EXPECT_THROW(w.p95(), std::invalid_argument);
}

TEST(LatencyWindow, RejectsNonPositiveCapacity) {
  EXPECT_THROW(LatencyWindow(0), std::invalid_argument);
}

TEST(KnobKindNames, StableStrings) {
  EXPECT_STREQ(knob_kind_name(KnobKind::kBatching), "batching");
  EXPECT_STREQ(knob_kind_name(KnobKind::kMultiTenancy), "multi-tenancy");
}

TEST(RandomStream, DeterministicPerSeed) {
  RandomStream a(42), b(42), c(43);
  bool all_equal = true;
  bool any_diff_from_c = false;
  for (int i = 0; i < 64; ++i) {
    const double ua = a.uniform();
    all_equal &= ua == b.uniform();
    any_diff_from_c |= ua != c.uniform();
  }
  EXPECT_TRUE(all_equal);
  EXPECT_TRUE(any_diff_from_c);
}

TEST(RandomStream, GaussianMomentsRoughlyStandard) {
  RandomStream rng(7);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.gaussian();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.03);
}

TEST(MixSeed, SeparatesJobStreams) {
  EXPECT_NE(mix_seed(42, 1), mix_seed(42, 2));
  EXPECT_NE(mix_seed(42, 1), mix_seed(43, 1));
  EXPECT_EQ(mix_seed(42, 1), mix_seed(42, 1));
}

}  // namespace
}  // namespace dnnscaler
