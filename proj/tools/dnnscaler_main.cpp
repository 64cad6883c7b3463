#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnnscaler/catalog.hpp"
#include "dnnscaler/gpu_sim.hpp"
#include "dnnscaler/harness.hpp"
#include "dnnscaler/report.hpp"
#include "dnnscaler/scenario.hpp"

namespace {

using namespace dnnscaler;

int log_level() {
  const char* env = std::getenv("DNNSCALER_LOG");
  if (!env) return 0;
  const std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[dnnscaler] %s\n", msg.c_str());
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed = 0;
  bool seed_set = false;
  double sigma = -1.0;
  std::string controller;
};

void add_scenario_flags(CLI::App* cmd, CommonFlags& flags, bool with_controller) {
  cmd->add_option("--config", flags.config_path, "Scenario JSON file")->required();
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--seed", flags.seed, "Seed override")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("--sigma", flags.sigma, "Latency noise scale override");
  if (with_controller)
    cmd->add_option("--controller", flags.controller,
                    "Controller override: dnnscaler, clipper, or static");
}

Scenario load_with_overrides(const CommonFlags& flags) {
  Scenario s = load_scenario(flags.config_path);
  if (flags.seed_set) s.seed = flags.seed;
  if (flags.sigma >= 0.0) s.sigma = flags.sigma;
  if (!flags.controller.empty()) {
    s.controller = parse_controller(flags.controller);
    if (s.controller == ControllerKind::kStaticKnob && s.static_knob.value < 1)
      throw std::invalid_argument("static controller needs static_knob in the scenario file");
  }
  validate_scenario(s);
  return s;
}

std::filesystem::path ensure_out_dir(const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void print_summary_table(const std::vector<JobTrace>& traces) {
  std::printf("%5s  %-26s %-13s %6s  %12s  %10s  %10s  %8s\n", "job", "dnn", "knob", "value",
              "throughput", "p95_ms", "compliance", "power_w");
  for (const auto& t : traces) {
    const auto& s = t.summary;
    if (!s.error.empty()) {
      std::printf("%5d  %-26s failed: %s\n", s.job_id, s.dnn_id.c_str(), s.error.c_str());
      continue;
    }
    std::printf("%5d  %-26s %-13s %6d  %12.2f  %10.2f  %10.3f  %8.1f\n", s.job_id,
                s.dnn_id.c_str(), knob_kind_name(s.steady_knob.kind), s.steady_knob.value,
                s.avg_throughput, s.p95_overall_ms, s.slo_compliance, s.avg_power_w);
  }
}

int cmd_profile(const std::string& catalog_path, const std::string& dnn_id, int m, int n,
                int batches, uint64_t seed, double sigma) {
  const auto catalog = load_catalog(catalog_path);
  const auto& dnn = find_dnn(catalog, dnn_id);
  const double used_sigma = sigma >= 0.0 ? sigma : dnn.sigma.value_or(0.05);
  const auto bm = calibrate_batching(dnn.batching_points, used_sigma);
  const auto mm = calibrate_mt(dnn.mt_points, used_sigma);
  PowerModel pm;
  if (dnn.u1) pm.u1 = *dnn.u1;
  GpuSim gpu(bm, mm, pm, GpuSim::Config{}, seed);
  const auto report = profile(gpu, m, n, batches);
  const auto approach = decide(report);

  std::printf("dnn: %s\n", dnn.id.c_str());
  std::printf("  base throughput   %10.2f items/s\n", report.tput_base);
  std::printf("  batching (bs=%d)  %10.2f items/s  gain %8.2f%%\n", report.m,
              report.tput_batching, report.ti_batching);
  std::printf("  multi-tenancy (%d) %10.2f items/s  gain %8.2f%%\n", report.n, report.tput_mt,
              report.ti_mt);
  std::printf("  profiling cost    %10.2f ms\n", report.profiling_cost_ms);
  std::printf("  approach: %s\n", approach_name(approach));
  std::printf("%s", render_profile_json(report, dnn.id, approach_name(approach)).c_str());
  return 0;
}

int cmd_run(const CommonFlags& flags) {
  const Scenario scenario = load_with_overrides(flags);
  const auto catalog = load_catalog(scenario.catalog_path);
  log_info("running " + std::to_string(scenario.jobs.size()) + " jobs with " +
           controller_name(scenario.controller));
  const auto traces = run_scenario(scenario, catalog);
  const auto dir = ensure_out_dir(flags.out_dir);
  write_file((dir / "metrics.csv").string(), render_metrics_csv(traces));
  write_file((dir / "summary.json").string(), render_summary_json(scenario, traces));
  print_summary_table(traces);
  for (const auto& t : traces)
    if (!t.summary.error.empty()) return 1;
  return 0;
}

int cmd_compare(const CommonFlags& flags) {
  Scenario scenario = load_with_overrides(flags);
  const auto catalog = load_catalog(scenario.catalog_path);

  Scenario scaler_side = scenario;
  scaler_side.controller = ControllerKind::kDnnScaler;
  Scenario clipper_side = scenario;
  clipper_side.controller = ControllerKind::kClipper;

  log_info("comparing controllers on " + std::to_string(scenario.jobs.size()) + " jobs");
  const auto scaler_traces = run_scenario(scaler_side, catalog);
  const auto clipper_traces = run_scenario(clipper_side, catalog);
  const auto rows = build_comparison(scaler_traces, clipper_traces);

  const auto dir = ensure_out_dir(flags.out_dir);
  write_file((dir / "metrics_dnnscaler.csv").string(), render_metrics_csv(scaler_traces));
  write_file((dir / "metrics_clipper.csv").string(), render_metrics_csv(clipper_traces));
  write_file((dir / "summary_dnnscaler.json").string(),
             render_summary_json(scaler_side, scaler_traces));
  write_file((dir / "summary_clipper.json").string(),
             render_summary_json(clipper_side, clipper_traces));
  write_file((dir / "comparison.csv").string(), render_comparison_csv(rows));

  std::printf("%5s  %-26s %-13s %14s  %14s  %12s\n", "job", "dnn", "approach", "dnnscaler",
              "clipper", "improvement");
  double sum = 0.0;
  for (const auto& r : rows) {
    std::printf("%5d  %-26s %-13s %14.2f  %14.2f  %11.2f%%\n", r.job_id, r.dnn_id.c_str(),
                r.approach.c_str(), r.scaler_throughput, r.clipper_throughput,
                r.improvement_pct);
    sum += r.improvement_pct;
  }
  if (!rows.empty())
    std::printf("average improvement: %.2f%%\n", sum / static_cast<double>(rows.size()));
  return 0;
}

int cmd_sensitivity(const CommonFlags& flags) {
  const Scenario scenario = load_with_overrides(flags);
  bool any_schedule = false;
  for (const auto& job : scenario.jobs) any_schedule |= !job.slo_schedule.empty();
  if (!any_schedule)
    throw std::invalid_argument("sensitivity needs at least one job with an slo_schedule");
  const auto catalog = load_catalog(scenario.catalog_path);
  const auto traces = run_scenario(scenario, catalog);
  const auto dir = ensure_out_dir(flags.out_dir);
  write_file((dir / "metrics.csv").string(), render_metrics_csv(traces));
  write_file((dir / "summary.json").string(), render_summary_json(scenario, traces));
  print_summary_table(traces);
  for (const auto& t : traces) {
    for (const auto& r : t.summary.readaptations) {
      if (r.periods < 0)
        std::printf("job %d: slo step at %.1fs, band not re-entered\n", t.summary.job_id, r.at_s);
      else
        std::printf("job %d: slo step at %.1fs, back in band after %d periods\n",
                    t.summary.job_id, r.at_s, r.periods);
    }
  }
  for (const auto& t : traces)
    if (!t.summary.error.empty()) return 1;
  return 0;
}

int cmd_sweep(const std::string& catalog_path, const std::string& dnn_id,
              const std::vector<int>& bs_list, const std::vector<int>& mtl_list,
              const std::string& out_dir, int samples, uint64_t seed, double sigma) {
  const auto catalog = load_catalog(catalog_path);
  const auto& dnn = find_dnn(catalog, dnn_id);
  const double used_sigma = sigma >= 0.0 ? sigma : 0.0;
  const auto bm = calibrate_batching(dnn.batching_points, used_sigma);
  const auto mm = calibrate_mt(dnn.mt_points, used_sigma);
  const auto cells = combination_sweep(bm, mm, bs_list, mtl_list, samples, seed);
  const auto dir = ensure_out_dir(out_dir);
  write_file((dir / "sweep.csv").string(), render_sweep_csv(cells));
  std::printf("%s", render_sweep_csv(cells).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated SLO-aware inference serving: profile-then-scale controller, "
               "Clipper-style baseline, and scenario harness"};
  app.require_subcommand(1);

  CommonFlags run_flags, compare_flags, sens_flags;

  std::string profile_catalog, profile_dnn;
  int profile_m = 32, profile_n = 8, profile_batches = 10;
  uint64_t profile_seed = 42;
  double profile_sigma = -1.0;
  auto* profile_cmd = app.add_subcommand("profile", "Probe one dnn and print the decision");
  profile_cmd->add_option("--catalog", profile_catalog, "Catalog JSON file")->required();
  profile_cmd->add_option("--dnn", profile_dnn, "Dnn id from the catalog")->required();
  profile_cmd->add_option("--m", profile_m, "Batch size probe");
  profile_cmd->add_option("--n", profile_n, "Instance count probe");
  profile_cmd->add_option("--batches", profile_batches, "Batches per probe point");
  profile_cmd->add_option("--seed", profile_seed, "Seed");
  profile_cmd->add_option("--sigma", profile_sigma, "Latency noise scale override");

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write metrics + summaries");
  add_scenario_flags(run_cmd, run_flags, true);

  auto* compare_cmd =
      app.add_subcommand("compare", "Run the scaling controller and the baseline side by side");
  add_scenario_flags(compare_cmd, compare_flags, false);

  auto* sens_cmd =
      app.add_subcommand("sensitivity", "Run a scenario whose jobs step their SLO mid-run");
  add_scenario_flags(sens_cmd, sens_flags, true);

  std::string sweep_catalog, sweep_dnn, sweep_out = ".";
  std::vector<int> sweep_bs, sweep_mtl;
  int sweep_samples = 100;
  uint64_t sweep_seed = 42;
  double sweep_sigma = -1.0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Measure a batch-size x instance-count grid");
  sweep_cmd->add_option("--catalog", sweep_catalog, "Catalog JSON file")->required();
  sweep_cmd->add_option("--dnn", sweep_dnn, "Dnn id from the catalog")->required();
  sweep_cmd->add_option("--bs", sweep_bs, "Batch sizes")->required()->delimiter(',');
  sweep_cmd->add_option("--mtl", sweep_mtl, "Instance counts")->required()->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "Output directory");
  sweep_cmd->add_option("--samples", sweep_samples, "Samples per grid cell");
  sweep_cmd->add_option("--seed", sweep_seed, "Seed");
  sweep_cmd->add_option("--sigma", sweep_sigma, "Latency noise scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (profile_cmd->parsed())
      return cmd_profile(profile_catalog, profile_dnn, profile_m, profile_n, profile_batches,
                         profile_seed, profile_sigma);
    if (run_cmd->parsed()) return cmd_run(run_flags);
    if (compare_cmd->parsed()) return cmd_compare(compare_flags);
    if (sens_cmd->parsed()) return cmd_sensitivity(sens_flags);
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_catalog, sweep_dnn, sweep_bs, sweep_mtl, sweep_out, sweep_samples,
                       sweep_seed, sweep_sigma);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
