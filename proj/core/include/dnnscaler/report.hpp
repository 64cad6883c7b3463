#pragma once

#include <string>
#include <vector>

#include "dnnscaler/harness.hpp"

namespace dnnscaler {

// Byte-stable renderers: same traces, same bytes, on every platform.
std::string render_metrics_csv(const std::vector<JobTrace>& traces);
std::string render_summary_json(const Scenario& scenario, const std::vector<JobTrace>& traces);
std::string render_sweep_csv(const std::vector<SweepCell>& cells);
std::string render_profile_json(const ProfileReport& report, const std::string& dnn_id,
                                const std::string& approach);

struct ComparisonRow {
  int job_id = 0;
  std::string dnn_id;
  std::string approach;
  double scaler_throughput = 0.0;
  double clipper_throughput = 0.0;
  double improvement_pct = 0.0;
  double scaler_steady = 0.0;
  double clipper_steady = 0.0;
  double steady_improvement_pct = 0.0;
};

std::vector<ComparisonRow> build_comparison(const std::vector<JobTrace>& scaler_traces,
                                            const std::vector<JobTrace>& clipper_traces);
std::string render_comparison_csv(const std::vector<ComparisonRow>& rows);

void write_file(const std::string& path, const std::string& content);

}  // namespace dnnscaler
