#pragma once

#include <string>
#include <vector>

#include "dnnscaler/catalog.hpp"
#include "dnnscaler/domain.hpp"
#include "dnnscaler/perf_model.hpp"
#include "dnnscaler/profiler.hpp"
#include "dnnscaler/scenario.hpp"

namespace dnnscaler {

struct Readaptation {
  double at_s = 0.0;    // when the SLO step took effect
  int periods = -1;     // control periods until the first in-band verdict
};

struct JobSummary {
  int job_id = 0;
  std::string dnn_id;
  std::string controller;
  std::string approach;  // knob kind actually controlled
  bool profiled = false;
  double ti_batching = 0.0;
  double ti_mt = 0.0;
  double profiling_cost_ms = 0.0;
  Knob steady_knob;
  bool converged = false;
  int knob_changes = 0;
  int settle_period = 0;  // first period of the steady segment
  int periods = 0;
  double duration_s = 0.0;
  double total_items = 0.0;
  double avg_throughput = 0.0;
  double steady_throughput = 0.0;
  double p95_overall_ms = 0.0;
  double slo_compliance = 0.0;  // steady segment, fraction in [0, 1]
  double avg_power_w = 0.0;
  double power_efficiency = 0.0;  // items/s per W
  double final_slo_ms = 0.0;
  std::vector<Readaptation> readaptations;
  std::string error;
};

struct JobTrace {
  JobSpec spec;
  std::vector<MetricsRecord> records;
  JobSummary summary;
};

// Per-level mean latencies of every other catalog entry, for seeding the
// multi-tenancy controller of a dnn the completion step must not see.
std::vector<std::vector<double>> derive_mt_rows(const std::vector<DnnProfile>& catalog,
                                                const std::string& exclude_id, int width);

// Runs one job end to end: profile (for the scaling controller), seed the
// knob, then serve in closed loop, one control decision per full window.
JobTrace run_job(const Scenario& scenario, const JobSpec& job,
                 const std::vector<DnnProfile>& catalog);

// Runs every job in the scenario; a failing job yields a trace carrying its
// error instead of aborting the rest.
std::vector<JobTrace> run_scenario(const Scenario& scenario,
                                   const std::vector<DnnProfile>& catalog);

struct SweepCell {
  int bs = 1;
  int mtl = 1;
  double mean_ms = 0.0;
  double p95_ms = 0.0;
  double throughput = 0.0;
};

// Open-grid measurement of batching and co-location combined: per-instance
// batch latency (a + b*bs) * max(1, k/capacity), no controller involved.
std::vector<SweepCell> combination_sweep(const BatchingModel& bm, const MtModel& mm,
                                         const std::vector<int>& bs_list,
                                         const std::vector<int>& mtl_list,
                                         int samples_per_cell = 100, uint64_t seed = 0);

}  // namespace dnnscaler
