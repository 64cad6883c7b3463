#include "dnnscaler/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace dnnscaler {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

ordered_json summary_to_json(const JobSummary& s) {
  ordered_json j;
  j["job_id"] = s.job_id;
  j["dnn_id"] = s.dnn_id;
  j["controller"] = s.controller;
  if (!s.error.empty()) {
    j["error"] = s.error;
    return j;
  }
  j["approach"] = s.approach;
  j["profiled"] = s.profiled;
  if (s.profiled) {
    j["ti_batching"] = s.ti_batching;
    j["ti_mt"] = s.ti_mt;
    j["profiling_cost_ms"] = s.profiling_cost_ms;
  }
  j["steady_knob"] = {{"kind", knob_kind_name(s.steady_knob.kind)}, {"value", s.steady_knob.value}};
  j["converged"] = s.converged;
  j["knob_changes"] = s.knob_changes;
  j["settle_period"] = s.settle_period;
  j["periods"] = s.periods;
  j["duration_s"] = s.duration_s;
  j["total_items"] = s.total_items;
  j["avg_throughput"] = s.avg_throughput;
  j["steady_throughput"] = s.steady_throughput;
  j["p95_overall_ms"] = s.p95_overall_ms;
  j["slo_compliance"] = s.slo_compliance;
  j["avg_power_w"] = s.avg_power_w;
  j["power_efficiency"] = s.power_efficiency;
  j["final_slo_ms"] = s.final_slo_ms;
  if (!s.readaptations.empty()) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : s.readaptations)
      arr.push_back({{"at_s", r.at_s}, {"periods", r.periods}});
    j["readaptations"] = arr;
  }
  return j;
}

}  // namespace

std::string render_metrics_csv(const std::vector<JobTrace>& traces) {
  std::string out =
      "time_s,job_id,knob_kind,knob_value,p95_ms,mean_ms,throughput,power_w,slo_ms,violated\n";
  for (const auto& trace : traces) {
    for (const auto& r : trace.records) {
      out += fixed6(r.time_s);
      out += ',';
      out += std::to_string(r.job_id);
      out += ',';
      out += knob_kind_name(r.knob.kind);
      out += ',';
      out += std::to_string(r.knob.value);
      out += ',';
      out += fixed6(r.p95_ms);
      out += ',';
      out += fixed6(r.mean_ms);
      out += ',';
      out += fixed6(r.throughput);
      out += ',';
      out += fixed6(r.power_w);
      out += ',';
      out += fixed6(r.slo_ms);
      out += ',';
      out += r.violated ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

std::string render_summary_json(const Scenario& scenario, const std::vector<JobTrace>& traces) {
  ordered_json doc;
  doc["seed"] = scenario.seed;
  doc["controller"] = controller_name(scenario.controller);
  doc["sigma"] = scenario.sigma;
  doc["alpha"] = scenario.alpha;
  ordered_json jobs = ordered_json::array();
  for (const auto& trace : traces) jobs.push_back(summary_to_json(trace.summary));
  doc["jobs"] = jobs;
  return doc.dump(2) + "\n";
}

std::string render_sweep_csv(const std::vector<SweepCell>& cells) {
  std::string out = "bs,mtl,mean_ms,p95_ms,throughput\n";
  for (const auto& c : cells) {
    out += std::to_string(c.bs);
    out += ',';
    out += std::to_string(c.mtl);
    out += ',';
    out += fixed6(c.mean_ms);
    out += ',';
    out += fixed6(c.p95_ms);
    out += ',';
    out += fixed6(c.throughput);
    out += '\n';
  }
  return out;
}

std::string render_profile_json(const ProfileReport& report, const std::string& dnn_id,
                                const std::string& approach) {
  ordered_json j;
  j["dnn_id"] = dnn_id;
  j["m"] = report.m;
  j["n"] = report.n;
  j["batches_per_point"] = report.batches_per_point;
  j["tput_base"] = report.tput_base;
  j["tput_batching"] = report.tput_batching;
  j["tput_mt"] = report.tput_mt;
  j["ti_batching"] = report.ti_batching;
  j["ti_mt"] = report.ti_mt;
  j["base_latency_ms"] = report.base_latency_ms;
  j["probe_latency_batching_ms"] = report.probe_latency_batching_ms;
  j["probe_latency_mt_ms"] = report.probe_latency_mt_ms;
  j["profiling_cost_ms"] = report.profiling_cost_ms;
  j["approach"] = approach;
  return j.dump(2) + "\n";
}

std::vector<ComparisonRow> build_comparison(const std::vector<JobTrace>& scaler_traces,
                                            const std::vector<JobTrace>& clipper_traces) {
  if (scaler_traces.size() != clipper_traces.size())
    throw std::invalid_argument("comparison needs matching job lists");
  std::vector<ComparisonRow> rows;
  for (size_t i = 0; i < scaler_traces.size(); ++i) {
    const auto& a = scaler_traces[i].summary;
    const auto& b = clipper_traces[i].summary;
    if (a.job_id != b.job_id) throw std::invalid_argument("comparison needs matching job lists");
    if (!a.error.empty() || !b.error.empty()) continue;
    ComparisonRow row;
    row.job_id = a.job_id;
    row.dnn_id = a.dnn_id;
    row.approach = a.approach;
    row.scaler_throughput = a.avg_throughput;
    row.clipper_throughput = b.avg_throughput;
    row.improvement_pct = throughput_improvement(a.avg_throughput, b.avg_throughput);
    row.scaler_steady = a.steady_throughput;
    row.clipper_steady = b.steady_throughput;
    row.steady_improvement_pct =
        b.steady_throughput > 0.0
            ? throughput_improvement(a.steady_throughput, b.steady_throughput)
            : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string render_comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out =
      "job_id,dnn_id,approach,scaler_throughput,clipper_throughput,improvement_pct,"
      "scaler_steady,clipper_steady,steady_improvement_pct\n";
  for (const auto& r : rows) {
    out += std::to_string(r.job_id);
    out += ',';
    out += r.dnn_id;
    out += ',';
    out += r.approach;
    out += ',';
    out += fixed6(r.scaler_throughput);
    out += ',';
    out += fixed6(r.clipper_throughput);
    out += ',';
    out += fixed6(r.improvement_pct);
    out += ',';
    out += fixed6(r.scaler_steady);
    out += ',';
    out += fixed6(r.clipper_steady);
    out += ',';
    out += fixed6(r.steady_improvement_pct);
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dnnscaler
