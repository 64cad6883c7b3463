#pragma once

#include "dnnscaler/gpu_sim.hpp"

namespace dnnscaler {

enum class Approach { kBatching, kMultiTenancy };

const char* approach_name(Approach approach);

struct ProfileReport {
  double tput_base = 0.0;       // items/s at batch size 1, single instance
  double tput_batching = 0.0;   // items/s at batch size m
  double tput_mt = 0.0;         // items/s at instance count n
  double ti_batching = 0.0;     // percent over tput_base
  double ti_mt = 0.0;
  double base_latency_ms = 0.0;           // mean batch latency at size 1
  double probe_latency_batching_ms = 0.0;  // mean batch latency at size m
  double probe_latency_mt_ms = 0.0;        // mean request latency at count n
  int m = 32;
  int n = 8;
  int batches_per_point = 10;
  double base_elapsed_ms = 0.0;
  double batching_elapsed_ms = 0.0;
  double mt_elapsed_ms = 0.0;
  double transition_ms = 0.0;
  double profiling_cost_ms = 0.0;
  double items_served = 0.0;
};

// Probes the device at batch size m and instance count n, each fed from the
// shared single-batch baseline. The single-instance throughput is measured
// once at batch size 1 and reused as the multi-tenancy baseline.
ProfileReport profile(GpuSim& gpu, int m = 32, int n = 8, int batches_per_point = 10);

// Picks the knob with the larger throughput improvement; within eps
// percentage points it is a tie and the lower probe latency wins.
Approach decide(const ProfileReport& report, double eps = 0.5);

}  // namespace dnnscaler
