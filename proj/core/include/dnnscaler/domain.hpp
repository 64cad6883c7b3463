#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dnnscaler {

enum class KnobKind { kBatching, kMultiTenancy };

const char* knob_kind_name(KnobKind kind);

struct Knob {
  KnobKind kind = KnobKind::kBatching;
  int value = 1;

  bool operator==(const Knob&) const = default;
};

// Measured throughput curves for one network, as shipped in a catalog file.
// Throughputs are items/s; batching_points holds (batch size, throughput),
// mt_points holds (instance count, throughput).
struct DnnProfile {
  std::string id;
  double params_millions = 0.0;
  double mflops = 0.0;
  std::vector<std::pair<int, double>> batching_points;
  std::vector<std::pair<int, double>> mt_points;
  std::optional<double> sigma;
  std::optional<double> u1;
};

struct SloStep {
  double at_s = 0.0;
  double slo_ms = 0.0;
};

struct JobSpec {
  int job_id = 0;
  std::string dnn_id;
  std::string dataset_tag;
  double slo_ms = 0.0;
  double duration_s = 0.0;
  std::vector<SloStep> slo_schedule;
};

struct MetricsRecord {
  double time_s = 0.0;
  int job_id = 0;
  Knob knob;
  double p95_ms = 0.0;
  double mean_ms = 0.0;
  double throughput = 0.0;
  double power_w = 0.0;
  double slo_ms = 0.0;
  bool violated = false;
};

// Nearest-rank percentile: the ceil(q*n)-th smallest sample, 0 < q <= 1.
double percentile(const std::vector<double>& samples, double q);

// Relative throughput gain over a baseline, in percent.
double throughput_improvement(double tput_new, double tput_base);

// The most recent latency samples, oldest evicted first.
class LatencyWindow {
 public:
  explicit LatencyWindow(size_t capacity = 100);

  void push(double latency_ms);
  void clear();

  bool full() const { return samples_.size() == capacity_; }
  size_t size() const { return samples_.size(); }
  size_t capacity() const { return capacity_; }
  std::vector<double> to_vector() const;
  double p95() const;
  double mean() const;

 private:
  size_t capacity_;
  std::deque<double> samples_;
};

}  // namespace dnnscaler
