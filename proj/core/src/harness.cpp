#include "dnnscaler/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dnnscaler/clipper.hpp"
#include "dnnscaler/gpu_sim.hpp"
#include "dnnscaler/matrix_completion.hpp"
#include "dnnscaler/scaler.hpp"

namespace dnnscaler {

namespace {

struct PeriodStats {
  BandVerdict verdict = BandVerdict::kInBand;
  bool knob_changed = false;
  double items = 0.0;
  double elapsed_ms = 0.0;
  size_t samples = 0;
  size_t compliant = 0;
};

// Model-mean serving rate in items per ms at a given instance count.
double mt_rate_items_per_ms(const MtModel& mm, int mtl) {
  return static_cast<double>(mtl) / mean_mt_latency(mm, mtl);
}

class JobRunner {
 public:
  JobRunner(const Scenario& scenario, const JobSpec& job, const std::vector<DnnProfile>& catalog)
      : scenario_(scenario),
        job_(job),
        catalog_(catalog),
        dnn_(find_dnn(catalog, job.dnn_id)),
        sigma_(dnn_.sigma.value_or(scenario.sigma)),
        bm_(calibrate_batching(dnn_.batching_points, sigma_)),
        mm_(calibrate_mt(dnn_.mt_points, sigma_)),
        gpu_(bm_, mm_, make_power_model(), GpuSim::Config{scenario.abs_max_bs, scenario.max_mtl},
             mix_seed(scenario.seed, static_cast<uint64_t>(job.job_id))) {
    if (job.duration_s <= 0.0) throw std::invalid_argument("zero duration");
  }

  JobTrace run() {
    JobTrace trace;
    trace.spec = job_;
    slo_ms_ = job_.slo_ms;

    setup_controller();
    const double duration_ms = job_.duration_s * 1000.0;
    while (gpu_.clock_ms() < duration_ms) {
      apply_schedule(trace);
      run_period(trace);
    }
    finish(trace);
    return trace;
  }

 private:
  PowerModel make_power_model() const {
    PowerModel pm;
    if (dnn_.u1) pm.u1 = *dnn_.u1;
    return pm;
  }

  double knob_power() const {
    return power_draw(gpu_.power_model(), utilization(gpu_.power_model(), knob_, bm_));
  }

  // Instance ramps serve at the model-mean pre-change rate while waiting.
  void ramp_mtl(int target) {
    while (gpu_.mtl() != target) {
      const int step = target > gpu_.mtl() ? 1 : -1;
      const double rate = mt_rate_items_per_ms(mm_, gpu_.mtl());
      const double power = knob_power();
      const double delay = gpu_.apply_instance_change(step);
      total_items_ += rate * delay;
      energy_mj_ += power * delay;
      knob_.value = gpu_.mtl();
    }
  }

  void setup_controller() {
    switch (scenario_.controller) {
      case ControllerKind::kDnnScaler: {
        report_ = profile(gpu_, scenario_.m, scenario_.n, kBatchesPerPoint);
        profiled_ = true;
        approach_ = decide(report_, kTieEpsPercent);
        total_items_ += report_.items_served;
        const auto& pm = gpu_.power_model();
        energy_mj_ +=
            power_draw(pm, utilization(pm, Knob{KnobKind::kBatching, 1}, bm_)) *
                report_.base_elapsed_ms +
            power_draw(pm, utilization(pm, Knob{KnobKind::kBatching, scenario_.m}, bm_)) *
                report_.batching_elapsed_ms +
            power_draw(pm, utilization(pm, Knob{KnobKind::kMultiTenancy, scenario_.n}, bm_)) *
                report_.mt_elapsed_ms +
            power_draw(pm, utilization(pm, Knob{KnobKind::kMultiTenancy, 1}, bm_)) *
                report_.transition_ms;
        if (approach_ == Approach::kBatching) {
          batch_ = make_batch_scaler(scenario_.abs_max_bs, scenario_.window);
          knob_ = Knob{KnobKind::kBatching, batch_.current_bs};
        } else {
          const int width = std::max(scenario_.max_mtl, scenario_.n);
          const auto rows = derive_mt_rows(catalog_, dnn_.id, width);
          CompletionOptions opts;
          opts.seed = scenario_.seed;
          const int init = mt_init(report_.base_latency_ms, report_.probe_latency_mt_ms,
                                   scenario_.n, rows, slo_ms_, scenario_.max_mtl, opts);
          mt_ = make_mt_scaler(init, scenario_.max_mtl, scenario_.window);
          knob_ = Knob{KnobKind::kMultiTenancy, gpu_.mtl()};
          ramp_mtl(init);
        }
        break;
      }
      case ControllerKind::kClipper:
        clipper_ = make_clipper(scenario_.abs_max_bs, scenario_.window);
        approach_ = Approach::kBatching;
        knob_ = Knob{KnobKind::kBatching, clipper_.current_bs};
        break;
      case ControllerKind::kStaticKnob: {
        const Knob k = scenario_.static_knob;
        const int limit = k.kind == KnobKind::kBatching ? scenario_.abs_max_bs : scenario_.max_mtl;
        if (k.value > limit) throw std::invalid_argument("static knob above device limit");
        approach_ = k.kind == KnobKind::kBatching ? Approach::kBatching : Approach::kMultiTenancy;
        static_window_ = LatencyWindow(scenario_.window);
        knob_ = Knob{k.kind, k.kind == KnobKind::kMultiTenancy ? gpu_.mtl() : k.value};
        if (k.kind == KnobKind::kMultiTenancy) ramp_mtl(k.value);
        break;
      }
    }
  }

  LatencyWindow& window() {
    switch (scenario_.controller) {
      case ControllerKind::kDnnScaler:
        return approach_ == Approach::kBatching ? batch_.window : mt_.window;
      case ControllerKind::kClipper:
        return clipper_.window;
      case ControllerKind::kStaticKnob:
        return static_window_;
    }
    return static_window_;
  }

  void apply_schedule(JobTrace& trace) {
    while (schedule_next_ < job_.slo_schedule.size() &&
           job_.slo_schedule[schedule_next_].at_s * 1000.0 <= gpu_.clock_ms()) {
      slo_ms_ = job_.slo_schedule[schedule_next_].slo_ms;
      Readaptation r;
      r.at_s = job_.slo_schedule[schedule_next_].at_s;
      trace.summary.readaptations.push_back(r);
      readapt_from_.push_back(periods_.size());
      ++schedule_next_;
    }
  }

  void run_period(JobTrace& trace) {
    const bool serving_batches = knob_.kind == KnobKind::kBatching;
    const double start_ms = gpu_.clock_ms();
    LatencyWindow& win = window();

    PeriodStats ps;
    double lat_sum = 0.0;
    const size_t w = scenario_.window;
    for (size_t i = 0; i < w; ++i) {
      const double lat = serving_batches ? gpu_.run_batch(knob_.value) : gpu_.run_mt_request();
      win.push(lat);
      all_latencies_.push_back(lat);
      lat_sum += lat;
      ps.samples += 1;
      if (lat <= slo_ms_) ps.compliant += 1;
    }
    ps.elapsed_ms = gpu_.clock_ms() - start_ms;
    ps.items = serving_batches ? static_cast<double>(w) * knob_.value : static_cast<double>(w);
    total_items_ += ps.items;
    energy_mj_ += knob_power() * ps.elapsed_ms;

    const double p95 = win.p95();
    ps.verdict = band_verdict(p95, slo_ms_, scenario_.alpha);

    MetricsRecord rec;
    rec.time_s = gpu_.clock_ms() / 1000.0;
    rec.job_id = job_.job_id;
    rec.knob = knob_;
    rec.p95_ms = p95;
    rec.mean_ms = lat_sum / static_cast<double>(w);
    rec.throughput = ps.items * 1000.0 / ps.elapsed_ms;
    rec.power_w = knob_power();
    rec.slo_ms = slo_ms_;
    rec.violated = p95 > slo_ms_;
    trace.records.push_back(rec);

    ps.knob_changed = step_controller(p95, ps);
    periods_.push_back(ps);
  }

  bool step_controller(double p95, const PeriodStats& ps) {
    switch (scenario_.controller) {
      case ControllerKind::kDnnScaler:
        if (approach_ == Approach::kBatching) {
          const auto d = batch_step(batch_, p95, slo_ms_, scenario_.alpha);
          knob_.value = batch_.current_bs;
          return d.changed;
        } else {
          const auto d = mt_step(mt_, p95, slo_ms_, scenario_.alpha);
          if (d.action != MtAction::kHold) {
            const double rate = ps.items / ps.elapsed_ms;
            const double power = knob_power();
            const double delay = gpu_.apply_instance_change(d.new_mtl - d.previous_mtl);
            total_items_ += rate * delay;
            energy_mj_ += power * delay;
            knob_.value = gpu_.mtl();
            return true;
          }
          return false;
        }
      case ControllerKind::kClipper: {
        const auto d = clipper_step(clipper_, p95, slo_ms_);
        knob_.value = clipper_.current_bs;
        return d.changed;
      }
      case ControllerKind::kStaticKnob:
        return false;
    }
    return false;
  }

  void finish(JobTrace& trace) {
    JobSummary& s = trace.summary;
    s.job_id = job_.job_id;
    s.dnn_id = job_.dnn_id;
    s.controller = controller_name(scenario_.controller);
    s.approach = knob_kind_name(knob_.kind);
    s.profiled = profiled_;
    if (profiled_) {
      s.ti_batching = report_.ti_batching;
      s.ti_mt = report_.ti_mt;
      s.profiling_cost_ms = report_.profiling_cost_ms;
    }
    s.steady_knob = knob_;
    s.periods = static_cast<int>(periods_.size());
    s.duration_s = gpu_.clock_ms() / 1000.0;
    s.total_items = total_items_;
    s.avg_throughput = total_items_ / s.duration_s;
    s.final_slo_ms = slo_ms_;

    int last_change = -1;
    for (size_t i = 0; i < periods_.size(); ++i) {
      if (periods_[i].knob_changed) last_change = static_cast<int>(i);
      s.knob_changes += periods_[i].knob_changed ? 1 : 0;
    }
    s.settle_period = last_change + 1;
    const size_t steady_from = static_cast<size_t>(last_change + 1);
    double steady_items = 0.0, steady_ms = 0.0;
    size_t steady_samples = 0, steady_compliant = 0;
    for (size_t i = steady_from; i < periods_.size(); ++i) {
      steady_items += periods_[i].items;
      steady_ms += periods_[i].elapsed_ms;
      steady_samples += periods_[i].samples;
      steady_compliant += periods_[i].compliant;
    }
    s.converged = periods_.size() - steady_from >= 2;
    s.steady_throughput = steady_ms > 0.0 ? steady_items * 1000.0 / steady_ms : 0.0;
    s.slo_compliance = steady_samples > 0
                           ? static_cast<double>(steady_compliant) / static_cast<double>(steady_samples)
                           : 0.0;
    s.p95_overall_ms = percentile(all_latencies_, 0.95);
    s.avg_power_w = energy_mj_ / gpu_.clock_ms();
    s.power_efficiency = s.avg_throughput / s.avg_power_w;

    for (size_t k = 0; k < readapt_from_.size(); ++k) {
      for (size_t i = readapt_from_[k]; i < periods_.size(); ++i) {
        if (periods_[i].verdict == BandVerdict::kInBand) {
          s.readaptations[k].periods = static_cast<int>(i - readapt_from_[k] + 1);
          break;
        }
      }
    }
  }

  static constexpr int kBatchesPerPoint = 10;
  static constexpr double kTieEpsPercent = 0.5;

  const Scenario& scenario_;
  const JobSpec& job_;
  const std::vector<DnnProfile>& catalog_;
  const DnnProfile& dnn_;
  double sigma_;
  BatchingModel bm_;
  MtModel mm_;
  GpuSim gpu_;

  double slo_ms_ = 0.0;
  Knob knob_;
  Approach approach_ = Approach::kBatching;
  bool profiled_ = false;
  ProfileReport report_;
  BatchScalerState batch_;
  MtScalerState mt_;
  ClipperState clipper_;
  LatencyWindow static_window_{100};

  std::vector<PeriodStats> periods_;
  std::vector<double> all_latencies_;
  std::vector<size_t> readapt_from_;
  size_t schedule_next_ = 0;
  double total_items_ = 0.0;
  double energy_mj_ = 0.0;  // W * ms
};

}  // namespace

std::vector<std::vector<double>> derive_mt_rows(const std::vector<DnnProfile>& catalog,
                                                const std::string& exclude_id, int width) {
  if (width < 1) throw std::invalid_argument("invalid row width");
  std::vector<std::vector<double>> rows;
  for (const auto& dnn : catalog) {
    if (dnn.id == exclude_id) continue;
    const MtModel mm = calibrate_mt(dnn.mt_points, 0.0);
    std::vector<double> row(static_cast<size_t>(width));
    for (int k = 1; k <= width; ++k) row[k - 1] = mean_mt_latency(mm, k);
    rows.push_back(std::move(row));
  }
  return rows;
}

JobTrace run_job(const Scenario& scenario, const JobSpec& job,
                 const std::vector<DnnProfile>& catalog) {
  JobRunner runner(scenario, job, catalog);
  return runner.run();
}

std::vector<JobTrace> run_scenario(const Scenario& scenario,
                                   const std::vector<DnnProfile>& catalog) {
  validate_scenario(scenario);
  std::vector<JobTrace> traces;
  traces.reserve(scenario.jobs.size());
  for (const auto& job : scenario.jobs) {
    try {
      traces.push_back(run_job(scenario, job, catalog));
    } catch (const std::exception& e) {
      JobTrace failed;
      failed.spec = job;
      failed.summary.job_id = job.job_id;
      failed.summary.dnn_id = job.dnn_id;
      failed.summary.controller = controller_name(scenario.controller);
      failed.summary.error = e.what();
      traces.push_back(std::move(failed));
    }
  }
  return traces;
}

std::vector<SweepCell> combination_sweep(const BatchingModel& bm, const MtModel& mm,
                                         const std::vector<int>& bs_list,
                                         const std::vector<int>& mtl_list,
                                         int samples_per_cell, uint64_t seed) {
  if (bs_list.empty() || mtl_list.empty()) throw std::invalid_argument("empty sweep grid");
  if (samples_per_cell < 1) throw std::invalid_argument("samples_per_cell must be positive");
  RandomStream rng(seed);
  std::vector<SweepCell> cells;
  for (int bs : bs_list) {
    if (bs < 1) throw std::invalid_argument("invalid batch size");
    for (int mtl : mtl_list) {
      if (mtl < 1) throw std::invalid_argument("invalid instance count");
      const double mean_instance_ms =
          mean_batch_latency(bm, bs) * std::max(1.0, static_cast<double>(mtl) / mm.capacity);
      std::vector<double> samples(static_cast<size_t>(samples_per_cell));
      double sum = 0.0;
      for (auto& s : samples) {
        s = mean_instance_ms * (bm.sigma > 0.0 ? std::exp(bm.sigma * rng.gaussian()) : 1.0);
        sum += s;
      }
      SweepCell cell;
      cell.bs = bs;
      cell.mtl = mtl;
      cell.mean_ms = sum / static_cast<double>(samples_per_cell);
      cell.p95_ms = percentile(samples, 0.95);
      cell.throughput = static_cast<double>(bs) * static_cast<double>(mtl) * 1000.0 / cell.mean_ms;
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace dnnscaler
