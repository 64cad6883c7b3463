#include "dnnscaler/profiler.hpp"

#include <stdexcept>

#include "dnnscaler/domain.hpp"

namespace dnnscaler {

const char* approach_name(Approach approach) {
  return approach == Approach::kBatching ? "batching" : "multi-tenancy";
}

ProfileReport profile(GpuSim& gpu, int m, int n, int batches_per_point) {
  if (m < 2) throw std::invalid_argument("batch probe needs m > 1");
  if (n < 2) throw std::invalid_argument("instance probe needs n > 1");
  if (m > gpu.config().abs_max_bs) throw std::invalid_argument("batch probe above device limit");
  if (n > gpu.config().max_mtl) throw std::invalid_argument("instance probe above device limit");
  if (batches_per_point < 1) throw std::invalid_argument("batches_per_point must be positive");
  if (gpu.mtl() != 1) throw std::invalid_argument("profiling starts from a single instance");

  ProfileReport r;
  r.m = m;
  r.n = n;
  r.batches_per_point = batches_per_point;
  const double start_ms = gpu.clock_ms();
  const double w = static_cast<double>(batches_per_point);

  double base_sum = 0.0;
  for (int i = 0; i < batches_per_point; ++i) base_sum += gpu.run_batch(1);
  r.base_elapsed_ms = base_sum;
  r.base_latency_ms = base_sum / w;
  r.tput_base = w * 1000.0 / base_sum;

  double batch_sum = 0.0;
  for (int i = 0; i < batches_per_point; ++i) batch_sum += gpu.run_batch(m);
  r.batching_elapsed_ms = batch_sum;
  r.probe_latency_batching_ms = batch_sum / w;
  r.tput_batching = w * static_cast<double>(m) * 1000.0 / batch_sum;

  // Each probe instance serves batches_per_point requests.
  r.transition_ms += gpu.set_mtl(n);
  double mt_sum = 0.0;
  const int requests = batches_per_point * n;
  for (int i = 0; i < requests; ++i) mt_sum += gpu.run_mt_request();
  r.mt_elapsed_ms = mt_sum / static_cast<double>(n);
  r.probe_latency_mt_ms = mt_sum / static_cast<double>(requests);
  r.tput_mt = static_cast<double>(requests) * 1000.0 / r.mt_elapsed_ms;
  r.transition_ms += gpu.set_mtl(1);

  r.ti_batching = throughput_improvement(r.tput_batching, r.tput_base);
  r.ti_mt = throughput_improvement(r.tput_mt, r.tput_base);
  r.profiling_cost_ms = gpu.clock_ms() - start_ms;
  r.items_served = w * (1.0 + static_cast<double>(m)) + static_cast<double>(requests);
  return r;
}

Approach decide(const ProfileReport& report, double eps) {
  if (eps < 0.0) throw std::invalid_argument("eps must be non-negative");
  if (report.ti_batching > report.ti_mt + eps) return Approach::kBatching;
  if (report.ti_mt > report.ti_batching + eps) return Approach::kMultiTenancy;
  return report.probe_latency_batching_ms <= report.probe_latency_mt_ms
             ? Approach::kBatching
             : Approach::kMultiTenancy;
}

}  // namespace dnnscaler
