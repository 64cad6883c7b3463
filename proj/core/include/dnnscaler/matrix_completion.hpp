#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dnnscaler {

// Partially observed latency matrix: rows are workloads, columns are
// co-location levels, values are per-request milliseconds.
struct LatencyMatrix {
  std::vector<std::vector<double>> values;
  std::vector<std::vector<uint8_t>> observed;

  size_t rows() const { return values.size(); }
  size_t cols() const { return values.empty() ? 0 : values.front().size(); }
  void validate() const;
};

struct CompletionOptions {
  int rank = 2;
  int max_iters = 200;
  double tol = 1e-8;
  double ridge = 1e-6;
  uint64_t seed = 0;
};

struct CompletionResult {
  std::vector<std::vector<double>> estimates;
  int rank_used = 0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // relative, over observed entries
};

// Alternating least squares on the observed entries. Estimates that come out
// negative are clamped to the smallest observed value in their row.
CompletionResult complete(const LatencyMatrix& m, const CompletionOptions& opts = {});

// Completes one partial row (keys are co-location levels, 1-based) against
// fully observed catalog rows. Observed entries pass through unchanged.
std::vector<double> estimate_row(const std::vector<std::vector<double>>& catalog_rows,
                                 const std::map<int, double>& observed, int n,
                                 const CompletionOptions& opts = {});

// Largest level at most max_mtl whose estimate is strictly under the SLO;
// level 1 when none is.
int pick_mtl(const std::vector<double>& estimates, double slo_ms, int max_mtl);

// Reads a fixture of fully observed latency rows: a JSON object mapping a
// dnn id to its per-level latencies in ms, index 0 being one instance.
std::map<std::string, std::vector<double>> load_latency_rows(const std::string& path);

}  // namespace dnnscaler
