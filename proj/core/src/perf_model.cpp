#include "dnnscaler/perf_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dnnscaler {

namespace {

double latency_from_point(const std::pair<int, double>& point) {
  if (point.first < 1) throw std::invalid_argument("invalid batch size");
  if (!(point.second > 0.0)) throw std::invalid_argument("invalid throughput");
  return 1000.0 * static_cast<double>(point.first) / point.second;
}

double noise_factor(double sigma, RandomStream& rng) {
  if (sigma <= 0.0) return 1.0;
  return std::exp(sigma * rng.gaussian());
}

}  // namespace

BatchingModel calibrate_batching(const std::vector<std::pair<int, double>>& points,
                                 double sigma) {
  if (points.size() < 2) throw std::invalid_argument("need at least two batching points");
  // Least squares over (bs_i, a + b*bs_i = 1000*bs_i / tput_i).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double x = static_cast<double>(p.first);
    const double y = latency_from_point(p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-12 * n * sxx) throw std::invalid_argument("singular calibration system");
  double b = (n * sxy - sx * sy) / det;
  double a = (sy - b * sx) / n;
  if (a < 0.0 && a > -1e-9) a = 0.0;
  if (a < 0.0) throw std::invalid_argument("calibration gives negative base cost");
  if (!(b > 0.0)) throw std::invalid_argument("calibration gives non-increasing batch cost");
  return BatchingModel{a, b, sigma};
}

MtModel calibrate_mt(const std::vector<std::pair<int, double>>& points, double sigma) {
  double tput1 = 0.0;
  double tput_hi = 0.0;
  int hi = 0;
  for (const auto& p : points) {
    if (p.first < 1) throw std::invalid_argument("invalid instance count");
    if (!(p.second > 0.0)) throw std::invalid_argument("invalid throughput");
    if (p.first == 1) tput1 = p.second;
    if (p.first > hi) {
      hi = p.first;
      tput_hi = p.second;
    }
  }
  if (tput1 <= 0.0) throw std::invalid_argument("missing single-instance point");
  if (hi < 2) throw std::invalid_argument("missing multi-instance point");
  MtModel m;
  m.l1_ms = 1000.0 / tput1;
  m.capacity = std::clamp(tput_hi / tput1, 1.0, static_cast<double>(hi));
  m.sigma = sigma;
  return m;
}

double mean_batch_latency(const BatchingModel& m, int bs) {
  if (bs < 1) throw std::invalid_argument("invalid batch size");
  return m.a_ms + m.b_ms * static_cast<double>(bs);
}

double mean_mt_latency(const MtModel& m, int mtl) {
  if (mtl < 1) throw std::invalid_argument("invalid instance count");
  return m.l1_ms * std::max(1.0, static_cast<double>(mtl) / m.capacity);
}

double batch_latency(const BatchingModel& m, int bs, RandomStream& rng) {
  return mean_batch_latency(m, bs) * noise_factor(m.sigma, rng);
}

double mt_latency(const MtModel& m, int mtl, RandomStream& rng) {
  return mean_mt_latency(m, mtl) * noise_factor(m.sigma, rng);
}

double utilization(const PowerModel& pm, const Knob& knob, const BatchingModel& bm) {
  if (knob.value < 1) throw std::invalid_argument("invalid knob value");
  if (knob.kind == KnobKind::kMultiTenancy) {
    return std::min(1.0, pm.u1 * static_cast<double>(knob.value));
  }
  const double total = bm.a_ms + bm.b_ms * static_cast<double>(knob.value);
  const double busy_share = total > 0.0 ? bm.b_ms * static_cast<double>(knob.value) / total : 1.0;
  return std::min(1.0, pm.u1 * busy_share * pm.s_bs);
}

double power_draw(const PowerModel& pm, double utilization) {
  const double u = std::clamp(utilization, 0.0, 1.0);
  return pm.p_idle_w + (pm.p_max_w - pm.p_idle_w) * u;
}

}  // namespace dnnscaler
