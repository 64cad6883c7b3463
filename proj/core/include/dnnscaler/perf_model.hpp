#pragma once

#include <utility>
#include <vector>

#include "dnnscaler/domain.hpp"
#include "dnnscaler/random.hpp"

namespace dnnscaler {

// One batch of size bs costs a + b*bs milliseconds, times lognormal noise
// exp(sigma * z) when sigma > 0.
struct BatchingModel {
  double a_ms = 0.0;
  double b_ms = 0.0;
  double sigma = 0.05;
};

// Co-located instances share the device. Per-request latency stays at l1 up
// to `capacity` concurrent instances and grows as k/capacity past it.
struct MtModel {
  double l1_ms = 0.0;
  double capacity = 1.0;
  double sigma = 0.05;
  double launch_delay_ms = 500.0;
  double terminate_delay_ms = 100.0;
};

struct PowerModel {
  double p_idle_w = 50.0;
  double p_max_w = 250.0;
  double u1 = 0.12;   // device utilization of one instance at batch size 1
  double s_bs = 1.0;  // batching utilization scale
};

// Fits the affine batch cost to measured (batch size, items/s) points.
// Exact for two points, least squares beyond that.
BatchingModel calibrate_batching(const std::vector<std::pair<int, double>>& points,
                                 double sigma = 0.05);

// Fits l1 and capacity to measured (instance count, items/s) points.
MtModel calibrate_mt(const std::vector<std::pair<int, double>>& points,
                     double sigma = 0.05);

double mean_batch_latency(const BatchingModel& m, int bs);
double mean_mt_latency(const MtModel& m, int mtl);

double batch_latency(const BatchingModel& m, int bs, RandomStream& rng);
double mt_latency(const MtModel& m, int mtl, RandomStream& rng);

double utilization(const PowerModel& pm, const Knob& knob, const BatchingModel& bm);
double power_draw(const PowerModel& pm, double utilization);

}  // namespace dnnscaler
