#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dnnscaler/catalog.hpp"
#include "dnnscaler/harness.hpp"
#include "dnnscaler/perf_model.hpp"
#include "dnnscaler/scenario.hpp"

namespace dnnscaler {
namespace {

const std::vector<DnnProfile>& bundled_catalog() {
  static const auto catalog =
      load_catalog(std::string(DNNSCALER_TEST_DATA_DIR) + "/catalog.json");
  return catalog;
}

Scenario base_scenario(ControllerKind controller, double sigma) {
  Scenario s;
  s.controller = controller;
  s.catalog_path = "catalog.json";
  s.sigma = sigma;
  return s;
}

JobSpec job(int id, const std::string& dnn, double slo_ms, double duration_s) {
  JobSpec spec;
  spec.job_id = id;
  spec.dnn_id = dnn;
  spec.slo_ms = slo_ms;
  spec.duration_s = duration_s;
  return spec;
}

TEST(RunJob, StaticBatchJobTracksTheLatencyLine) {
  auto sc = base_scenario(ControllerKind::kStaticKnob, 0.0);
  sc.static_knob = {KnobKind::kBatching, 1};

  const auto trace = run_job(sc, job(3, "inc-v4-imagenet", 419.0, 60.0), bundled_catalog());
  const auto& s = trace.summary;
  EXPECT_TRUE(s.error.empty());
  EXPECT_EQ(s.approach, "batching");
  EXPECT_EQ(s.controller, "static");
  EXPECT_FALSE(s.profiled);
  EXPECT_EQ(s.knob_changes, 0);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.avg_throughput, 36.81, 1e-9);
  EXPECT_NEAR(s.steady_throughput, 36.81, 1e-9);
  EXPECT_DOUBLE_EQ(s.total_items, 100.0 * s.periods);

  const double l1 = 1000.0 / 36.81;
  ASSERT_FALSE(trace.records.empty());
  for (const auto& r : trace.records) {
    EXPECT_NEAR(r.p95_ms, l1, 1e-9);
    EXPECT_NEAR(r.mean_ms, l1, 1e-9);
    EXPECT_FALSE(r.violated);
    EXPECT_EQ(r.knob.value, 1);
  }
}

TEST(RunJob, MtJobSettlesAtTheCapacityKnee) {
  const auto sc = base_scenario(ControllerKind::kDnnScaler, 0.0);
  const auto trace = run_job(sc, job(1, "inc-v1-imagenet", 35.0, 120.0), bundled_catalog());
  const auto& s = trace.summary;

  EXPECT_TRUE(s.profiled);
  EXPECT_EQ(s.approach, "multi-tenancy");
  EXPECT_NEAR(s.ti_batching, 5.9076, 0.01);
  EXPECT_NEAR(s.ti_mt, 99.9663, 0.01);
  EXPECT_GT(s.profiling_cost_ms, 0.0);
  EXPECT_EQ(s.steady_knob.kind, KnobKind::kMultiTenancy);
  EXPECT_EQ(s.steady_knob.value, 8);
  EXPECT_EQ(s.knob_changes, 0);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.steady_throughput, 237.28, 1e-6);
  EXPECT_DOUBLE_EQ(s.slo_compliance, 1.0);
  EXPECT_NEAR(s.p95_overall_ms, 8000.0 / 237.28, 1e-9);
  EXPECT_LE(s.p95_overall_ms, 35.0);
  EXPECT_DOUBLE_EQ(s.final_slo_ms, 35.0);

  // Profiling and ramp items are charged to the run on top of the served
  // windows, and its clock time keeps the run past the nominal duration.
  EXPECT_GT(s.total_items, 100.0 * s.periods);
  EXPECT_GT(s.duration_s, 120.0);
  EXPECT_GT(s.avg_power_w, 50.0);
  EXPECT_LT(s.avg_power_w, 250.0);
  EXPECT_NEAR(s.power_efficiency, s.avg_throughput / s.avg_power_w, 1e-12);
}

TEST(RunJob, RerunsAreBitwiseIdentical) {
  const auto sc = base_scenario(ControllerKind::kDnnScaler, 0.05);
  const auto a = run_job(sc, job(1, "inc-v1-imagenet", 35.0, 30.0), bundled_catalog());
  const auto b = run_job(sc, job(1, "inc-v1-imagenet", 35.0, 30.0), bundled_catalog());

  ASSERT_EQ(a.records.size(), b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].time_s, b.records[i].time_s);
    EXPECT_EQ(a.records[i].p95_ms, b.records[i].p95_ms);
    EXPECT_EQ(a.records[i].mean_ms, b.records[i].mean_ms);
    EXPECT_EQ(a.records[i].throughput, b.records[i].throughput);
    EXPECT_EQ(a.records[i].knob, b.records[i].knob);
  }
  EXPECT_EQ(a.summary.total_items, b.summary.total_items);
  EXPECT_EQ(a.summary.avg_power_w, b.summary.avg_power_w);
}

TEST(RunJob, SeedSeparatesJobs) {
  const auto sc = base_scenario(ControllerKind::kDnnScaler, 0.05);
  const auto a = run_job(sc, job(1, "inc-v1-imagenet", 35.0, 30.0), bundled_catalog());
  const auto b = run_job(sc, job(2, "inc-v1-imagenet", 35.0, 30.0), bundled_catalog());
  ASSERT_FALSE(a.records.empty());
  ASSERT_FALSE(b.records.empty());
  EXPECT_NE(a.records[0].mean_ms, b.records[0].mean_ms);
}

TEST(RunScenario, CarriesPerJobErrors) {
  auto sc = base_scenario(ControllerKind::kDnnScaler, 0.0);
  sc.jobs.push_back(job(1, "inc-v4-imagenet", 419.0, 10.0));
  sc.jobs.push_back(job(2, "inc-v4-imagenet", 419.0, 0.0));
  sc.jobs.push_back(job(3, "ghost", 419.0, 10.0));

  const auto traces = run_scenario(sc, bundled_catalog());
  ASSERT_EQ(traces.size(), 3u);
  EXPECT_TRUE(traces[0].summary.error.empty());
  EXPECT_EQ(traces[1].summary.error, "zero duration");
  EXPECT_EQ(traces[2].summary.error, "unknown dnn: ghost");
  EXPECT_TRUE(traces[1].records.empty());
  EXPECT_EQ(traces[1].summary.job_id, 2);
}

TEST(RunScenario, StaticKnobAboveTheDeviceLimitFails) {
  auto sc = base_scenario(ControllerKind::kStaticKnob, 0.0);
  sc.static_knob = {KnobKind::kMultiTenancy, 20};
  sc.jobs.push_back(job(1, "inc-v1-imagenet", 35.0, 10.0));

  const auto traces = run_scenario(sc, bundled_catalog());
  ASSERT_EQ(traces.size(), 1u);
  EXPECT_EQ(traces[0].summary.error, "static knob above device limit");
}

TEST(RunJob, ClipperBacksOffMultiplicatively) {
  const auto sc = base_scenario(ControllerKind::kClipper, 0.0);
  const auto trace = run_job(sc, job(24, "resv2-50-caltech", 31.0, 120.0), bundled_catalog());
  const auto& s = trace.summary;

  EXPECT_EQ(s.approach, "batching");
  EXPECT_FALSE(s.profiled);
  EXPECT_EQ(s.steady_knob.value, 3);
  EXPECT_EQ(s.knob_changes, 3);
  EXPECT_NEAR(s.steady_throughput, 109.485, 0.01);

  ASSERT_GE(trace.records.size(), 4u);
  EXPECT_EQ(trace.records[0].knob.value, 1);
  EXPECT_FALSE(trace.records[0].violated);
  EXPECT_EQ(trace.records[1].knob.value, 5);
  EXPECT_TRUE(trace.records[1].violated);
  EXPECT_EQ(trace.records[2].knob.value, 4);
  EXPECT_TRUE(trace.records[2].violated);
  EXPECT_EQ(trace.records[3].knob.value, 3);
  EXPECT_FALSE(trace.records[3].violated);
}

TEST(RunJob, SloStepDownRemovesInstancesOneByOne) {
  const auto sc = load_scenario(std::string(DNNSCALER_TEST_DATA_DIR) + "/sensitivity_mt_down.json");
  const auto catalog = load_catalog(sc.catalog_path);
  const auto traces = run_scenario(sc, catalog);
  ASSERT_EQ(traces.size(), 1u);
  const auto& trace = traces[0];
  const auto& s = trace.summary;

  ASSERT_EQ(s.readaptations.size(), 1u);
  EXPECT_DOUBLE_EQ(s.readaptations[0].at_s, 120.0);
  EXPECT_EQ(s.readaptations[0].periods, 6);
  EXPECT_EQ(s.steady_knob.value, 5);
  EXPECT_DOUBLE_EQ(s.final_slo_ms, 24.0);
  EXPECT_DOUBLE_EQ(s.slo_compliance, 1.0);

  std::vector<int> post_step;
  for (const auto& r : trace.records) {
    if (r.slo_ms == 24.0 && post_step.size() < 7) post_step.push_back(r.knob.value);
  }
  EXPECT_EQ(post_step, (std::vector<int>{10, 9, 8, 7, 6, 5, 5}));
}

TEST(RunJob, SloStepUpGrowsTheKnob) {
  const auto sc = load_scenario(std::string(DNNSCALER_TEST_DATA_DIR) + "/sensitivity_mt_up.json");
  const auto traces = run_scenario(sc, load_catalog(sc.catalog_path));
  const auto& s = traces[0].summary;

  int knob_before_step = 0;
  for (const auto& r : traces[0].records) {
    if (r.time_s <= 120.0) knob_before_step = r.knob.value;
  }
  EXPECT_EQ(knob_before_step, 5);
  EXPECT_EQ(s.steady_knob.value, 10);
  ASSERT_EQ(s.readaptations.size(), 1u);
  EXPECT_EQ(s.readaptations[0].periods, 6);
}

TEST(RunJob, UnreachableSloStepNeverReturnsInBand) {
  auto sc = base_scenario(ControllerKind::kDnnScaler, 0.0);
  auto spec = job(1, "inc-v1-caltech", 48.0, 60.0);
  spec.slo_schedule.push_back({30.0, 1.0});

  const auto trace = run_job(sc, spec, bundled_catalog());
  const auto& s = trace.summary;
  ASSERT_EQ(s.readaptations.size(), 1u);
  EXPECT_EQ(s.readaptations[0].periods, -1);
  EXPECT_EQ(s.steady_knob.value, 1);
  EXPECT_DOUBLE_EQ(s.slo_compliance, 0.0);
}

TEST(DeriveMtRows, ExcludesTheTargetAndStaysMonotone) {
  const auto rows = derive_mt_rows(bundled_catalog(), "inc-v1-imagenet", 10);
  ASSERT_EQ(rows.size(), 28u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 10u);
    for (size_t k = 1; k < row.size(); ++k) EXPECT_GE(row[k], row[k - 1] - 1e-12);
  }
  // First row is the next catalog entry, inc-v2-imagenet.
  EXPECT_NEAR(rows[0][0], 1000.0 / 104.46, 1e-9);
  EXPECT_NEAR(rows[0][7], 8000.0 / 169.85, 1e-9);

  EXPECT_THROW(derive_mt_rows(bundled_catalog(), "", 0), std::invalid_argument);
}

TEST(CombinationSweep, MatchesTheClosedFormWithoutNoise) {
  const BatchingModel bm{10.0, 5.0, 0.0};
  MtModel mm;
  mm.l1_ms = 20.0;
  mm.capacity = 2.0;
  mm.sigma = 0.0;

  const auto cells = combination_sweep(bm, mm, {1, 4}, {1, 2}, 10, 7);
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0].bs, 1);
  EXPECT_EQ(cells[0].mtl, 1);
  EXPECT_DOUBLE_EQ(cells[0].mean_ms, 15.0);
  EXPECT_DOUBLE_EQ(cells[0].p95_ms, 15.0);
  EXPECT_DOUBLE_EQ(cells[0].throughput, 1000.0 / 15.0);

  const auto& c = cells[3];
  EXPECT_EQ(c.bs, 4);
  EXPECT_EQ(c.mtl, 2);
  EXPECT_DOUBLE_EQ(c.mean_ms, 30.0);
  EXPECT_DOUBLE_EQ(c.throughput, 4.0 * 2.0 * 1000.0 / 30.0);

  EXPECT_THROW(combination_sweep(bm, mm, {}, {1}, 10, 7), std::invalid_argument);
  EXPECT_THROW(combination_sweep(bm, mm, {1}, {0}, 10, 7), std::invalid_argument);
  EXPECT_THROW(combination_sweep(bm, mm, {1}, {1}, 0, 7), std::invalid_argument);
}

}  // namespace
}  // namespace dnnscaler
