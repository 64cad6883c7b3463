#pragma once

#include <cstdint>

#include "dnnscaler/perf_model.hpp"
#include "dnnscaler/random.hpp"

namespace dnnscaler {

// Simulated single-GPU serving backend. Time is virtual: every served batch
// or request advances the clock, and instance changes charge their ramp
// delays. One stream of noise per sim keeps runs reproducible by seed.
class GpuSim {
 public:
  struct Config {
    int abs_max_bs = 128;
    int max_mtl = 10;
  };

  GpuSim(BatchingModel bm, MtModel mm, PowerModel pm, Config config, uint64_t seed);

  // Serves one batch; returns its latency and advances the clock by it.
  double run_batch(int bs);

  // Serves one request under the current instance count; the clock advances
  // by latency / mtl since requests are spread across instances.
  double run_mt_request();

  // Single instance launch or termination; returns the delay charged.
  double apply_instance_change(int delta);

  // Ramps to `target` one instance at a time; returns the total delay.
  double set_mtl(int target);

  int mtl() const { return mtl_; }
  double clock_ms() const { return clock_ms_; }
  const BatchingModel& batching_model() const { return bm_; }
  const MtModel& mt_model() const { return mm_; }
  const PowerModel& power_model() const { return pm_; }
  const Config& config() const { return config_; }

 private:
  BatchingModel bm_;
  MtModel mm_;
  PowerModel pm_;
  Config config_;
  RandomStream rng_;
  double clock_ms_ = 0.0;
  int mtl_ = 1;
};

}  // namespace dnnscaler
