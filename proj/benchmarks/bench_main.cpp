#include <benchmark/benchmark.h>

#include <array>

#include "dnnscaler/clipper.hpp"
#include "dnnscaler/domain.hpp"
#include "dnnscaler/harness.hpp"
#include "dnnscaler/matrix_completion.hpp"
#include "dnnscaler/perf_model.hpp"
#include "dnnscaler/random.hpp"
#include "dnnscaler/scenario.hpp"

namespace {

using namespace dnnscaler;

void BM_BatchLatency(benchmark::State& state) {
  BatchingModel bm{19.18, 7.99, 0.05};
  RandomStream rng(42);
  for (auto _ : state) benchmark::DoNotOptimize(batch_latency(bm, 32, rng));
}
BENCHMARK(BM_BatchLatency);

void BM_Percentile(benchmark::State& state) {
  RandomStream rng(7);
  std::vector<double> samples(static_cast<size_t>(state.range(0)));
  for (auto& s : samples) s = 10.0 + 5.0 * rng.uniform();
  for (auto _ : state) {
    auto copy = samples;
    benchmark::DoNotOptimize(percentile(copy, 0.95));
  }
}
BENCHMARK(BM_Percentile)->Arg(100)->Arg(10000);

void BM_ClipperStep(benchmark::State& state) {
  auto st = make_clipper(128);
  RandomStream rng(11);
  for (auto _ : state) {
    const double p95 = 80.0 + 45.0 * rng.uniform();
    benchmark::DoNotOptimize(clipper_step(st, p95, 100.0));
  }
}
BENCHMARK(BM_ClipperStep);

void BM_CompleteRank2(benchmark::State& state) {
  RandomStream rng(5);
  LatencyMatrix m;
  m.values.assign(8, std::vector<double>(10, 0.0));
  m.observed.assign(8, std::vector<uint8_t>(10, 0));
  std::vector<std::array<double, 2>> U(8), V(10);
  for (auto& r : U) r = {0.5 + rng.uniform(), 0.5 + rng.uniform()};
  for (auto& r : V) r = {0.5 + rng.uniform(), 0.5 + rng.uniform()};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 10; ++j) {
      m.values[i][j] = U[i][0] * V[j][0] + U[i][1] * V[j][1];
      m.observed[i][j] = rng.uniform() < 0.6 || j == 0 || j == 9;
    }
  for (auto _ : state) benchmark::DoNotOptimize(complete(m));
}
BENCHMARK(BM_CompleteRank2);

void BM_RunJob(benchmark::State& state) {
  DnnProfile dnn;
  dnn.id = "bench-net";
  dnn.batching_points = {{1, 118.66}, {32, 125.67}};
  dnn.mt_points = {{1, 118.66}, {8, 237.28}};
  dnn.u1 = 0.48;
  const std::vector<DnnProfile> catalog{dnn};
  Scenario scenario;
  scenario.sigma = 0.05;
  JobSpec job;
  job.job_id = 1;
  job.dnn_id = "bench-net";
  job.slo_ms = 35.0;
  job.duration_s = 60.0;
  scenario.jobs = {job};
  for (auto _ : state) benchmark::DoNotOptimize(run_job(scenario, job, catalog));
}
BENCHMARK(BM_RunJob);

}  // namespace
