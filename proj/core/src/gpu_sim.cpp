#include "dnnscaler/gpu_sim.hpp"

#include <stdexcept>

namespace dnnscaler {

GpuSim::GpuSim(BatchingModel bm, MtModel mm, PowerModel pm, Config config, uint64_t seed)
    : bm_(bm), mm_(mm), pm_(pm), config_(config), rng_(seed) {
  if (config_.abs_max_bs < 1 || config_.max_mtl < 1)
    throw std::invalid_argument("invalid device limits");
}

double GpuSim::run_batch(int bs) {
  if (bs < 1 || bs > config_.abs_max_bs) throw std::invalid_argument("invalid batch size");
  const double lat = batch_latency(bm_, bs, rng_);
  clock_ms_ += lat;
  return lat;
}

double GpuSim::run_mt_request() {
  const double lat = mt_latency(mm_, mtl_, rng_);
  clock_ms_ += lat / static_cast<double>(mtl_);
  return lat;
}

double GpuSim::apply_instance_change(int delta) {
  if (delta == 0) return 0.0;
  if (delta != 1 && delta != -1)
    throw std::invalid_argument("instance changes are single steps");
  const int target = mtl_ + delta;
  if (target < 1) throw std::invalid_argument("cannot terminate last instance");
  if (target > config_.max_mtl) throw std::invalid_argument("instance limit exceeded");
  const double delay = delta > 0 ? mm_.launch_delay_ms : mm_.terminate_delay_ms;
  clock_ms_ += delay;
  mtl_ = target;
  return delay;
}

double GpuSim::set_mtl(int target) {
  if (target < 1) throw std::invalid_argument("cannot terminate last instance");
  if (target > config_.max_mtl) throw std::invalid_argument("instance limit exceeded");
  double total = 0.0;
  while (mtl_ < target) total += apply_instance_change(1);
  while (mtl_ > target) total += apply_instance_change(-1);
  return total;
}

}  // namespace dnnscaler
