#include "dnnscaler/scaler.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dnnscaler {

BandVerdict band_verdict(double p95_ms, double slo_ms, double alpha) {
  if (!(slo_ms > 0.0)) throw std::invalid_argument("invalid slo");
  if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("alpha out of range");
  if (p95_ms > slo_ms) return BandVerdict::kAbove;
  if (p95_ms < alpha * slo_ms) return BandVerdict::kBelow;
  return BandVerdict::kInBand;
}

BatchScalerState make_batch_scaler(int abs_max_bs, size_t window_capacity) {
  if (abs_max_bs < 1) throw std::invalid_argument("invalid batch size limit");
  BatchScalerState st;
  st.min_bs = 1;
  st.max_bs = abs_max_bs;
  st.current_bs = 1;
  st.abs_max_bs = abs_max_bs;
  st.window = LatencyWindow(window_capacity);
  return st;
}

BatchDecision batch_step(BatchScalerState& st, double p95_ms, double slo_ms, double alpha) {
  BatchDecision d;
  d.verdict = band_verdict(p95_ms, slo_ms, alpha);
  d.previous_bs = st.current_bs;

  switch (d.verdict) {
    case BandVerdict::kInBand:
      st.infeasible = false;
      break;
    case BandVerdict::kBelow:
      st.infeasible = false;
      st.min_bs = st.current_bs;
      st.max_bs = st.abs_max_bs;
      st.current_bs = (st.min_bs + st.max_bs + 1) / 2;
      break;
    case BandVerdict::kAbove:
      if (st.current_bs == 1) {
        // Violating at size 1: nothing to shrink. Flag it and keep probing
        // so a later SLO relaxation can recover.
        st.infeasible = true;
      } else if (st.current_bs == st.min_bs) {
        st.max_bs = st.current_bs;
        st.min_bs = 1;
        st.current_bs = (st.min_bs + st.max_bs) / 2;
      } else {
        st.max_bs = st.current_bs;
        st.current_bs = (st.min_bs + st.max_bs) / 2;
      }
      break;
  }

  d.new_bs = st.current_bs;
  d.changed = d.new_bs != d.previous_bs;
  if (d.changed) st.window.clear();
  return d;
}

MtScalerState make_mt_scaler(int initial_mtl, int max_mtl, size_t window_capacity) {
  if (max_mtl < 1) throw std::invalid_argument("invalid instance limit");
  if (initial_mtl < 1 || initial_mtl > max_mtl)
    throw std::invalid_argument("initial instance count out of range");
  MtScalerState st;
  st.mtl = initial_mtl;
  st.max_mtl = max_mtl;
  st.window = LatencyWindow(window_capacity);
  return st;
}

MtDecision mt_step(MtScalerState& st, double p95_ms, double slo_ms, double alpha) {
  MtDecision d;
  d.verdict = band_verdict(p95_ms, slo_ms, alpha);
  d.previous_mtl = st.mtl;

  MtAction action = MtAction::kHold;
  switch (d.verdict) {
    case BandVerdict::kInBand:
      st.damped = false;
      break;
    case BandVerdict::kBelow:
      if (st.damped) break;  // the add was already tried and rolled back
      if (st.mtl < st.max_mtl) action = MtAction::kAdd;
      break;
    case BandVerdict::kAbove:
      if (st.mtl > 1) {
        action = MtAction::kRemoveLast;
        st.damped = st.last_action == MtAction::kAdd;
      } else {
        st.damped = false;
        d.infeasible = true;
      }
      break;
  }

  if (action == MtAction::kAdd) st.mtl += 1;
  if (action == MtAction::kRemoveLast) st.mtl -= 1;
  if (action != MtAction::kHold) st.window.clear();
  st.last_action = action;

  d.action = action;
  d.new_mtl = st.mtl;
  return d;
}

int mt_init(double lat1_ms, double latn_ms, int n_probe,
            const std::vector<std::vector<double>>& catalog_rows, double slo_ms,
            int max_mtl, const CompletionOptions& opts) {
  if (!(lat1_ms > 0.0) || !(latn_ms > 0.0)) throw std::invalid_argument("invalid probe latency");
  if (n_probe < 2) throw std::invalid_argument("instance probe needs n > 1");
  if (max_mtl < 1) throw std::invalid_argument("invalid instance limit");

  const int width = std::max(max_mtl, n_probe);
  std::map<int, double> observed{{1, lat1_ms}, {n_probe, latn_ms}};
  if (catalog_rows.empty()) {
    std::vector<double> sparse(static_cast<size_t>(width), slo_ms);
    sparse[0] = lat1_ms;
    sparse[static_cast<size_t>(n_probe) - 1] = latn_ms;
    return pick_mtl(sparse, slo_ms, max_mtl);
  }
  const auto estimates = estimate_row(catalog_rows, observed, width, opts);
  return pick_mtl(estimates, slo_ms, max_mtl);
}

}  // namespace dnnscaler
