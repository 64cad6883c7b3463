#include "dnnscaler/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dnnscaler {

const char* knob_kind_name(KnobKind kind) {
  return kind == KnobKind::kBatching ? "batching" : "multi-tenancy";
}

double percentile(const std::vector<double>& samples, double q) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("quantile out of range");
  const size_t n = samples.size();
  // The epsilon keeps q*n from ticking past an exact integer rank.
  size_t rank = static_cast<size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  rank = std::clamp<size_t>(rank, 1, n);
  std::vector<double> scratch(samples);
  std::nth_element(scratch.begin(), scratch.begin() + (rank - 1), scratch.end());
  return scratch[rank - 1];
}

double throughput_improvement(double tput_new, double tput_base) {
  if (!(tput_base > 0.0)) throw std::invalid_argument("invalid baseline");
  return (tput_new - tput_base) / tput_base * 100.0;
}

LatencyWindow::LatencyWindow(size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("window capacity must be positive");
}

void LatencyWindow::push(double latency_ms) {
  if (samples_.size() == capacity_) samples_.pop_front();
  samples_.push_back(latency_ms);
}

void LatencyWindow::clear() { samples_.clear(); }

std::vector<double> LatencyWindow::to_vector() const {
  return std::vector<double>(samples_.begin(), samples_.end());
}

double LatencyWindow::p95() const { return percentile(to_vector(), 0.95); }

double LatencyWindow::mean() const {
  if (samples_.empty()) throw std::invalid_argument("no samples");
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

}  // namespace dnnscaler
