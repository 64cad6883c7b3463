#pragma once

#include <vector>

#include "dnnscaler/domain.hpp"
#include "dnnscaler/matrix_completion.hpp"

namespace dnnscaler {

// Target operating band for the p95: [alpha * SLO, SLO].
enum class BandVerdict { kBelow, kInBand, kAbove };

BandVerdict band_verdict(double p95_ms, double slo_ms, double alpha = 0.85);

// Pseudo-binary search over batch size. Headroom jumps to the midpoint
// between the current size and the absolute cap; a violation bisects down
// within the tracked bounds, and a violation at the lower bound restarts
// the search from 1.
struct BatchScalerState {
  int min_bs = 1;
  int max_bs = 128;
  int current_bs = 1;
  int abs_max_bs = 128;
  bool infeasible = false;
  LatencyWindow window{100};
};

BatchScalerState make_batch_scaler(int abs_max_bs, size_t window_capacity = 100);

struct BatchDecision {
  BandVerdict verdict = BandVerdict::kInBand;
  int previous_bs = 1;
  int new_bs = 1;
  bool changed = false;
};

BatchDecision batch_step(BatchScalerState& st, double p95_ms, double slo_ms,
                         double alpha = 0.85);

enum class MtAction { kHold, kAdd, kRemoveLast };

// One-instance-at-a-time controller. A removal that immediately follows an
// addition arms a damper so the pair cannot ping-pong; the damper holds
// through further headroom and disarms when the band verdict changes.
struct MtScalerState {
  int mtl = 1;
  int max_mtl = 10;
  MtAction last_action = MtAction::kHold;
  bool damped = false;
  LatencyWindow window{100};
};

MtScalerState make_mt_scaler(int initial_mtl, int max_mtl, size_t window_capacity = 100);

struct MtDecision {
  BandVerdict verdict = BandVerdict::kInBand;
  MtAction action = MtAction::kHold;
  int previous_mtl = 1;
  int new_mtl = 1;
  bool infeasible = false;
};

MtDecision mt_step(MtScalerState& st, double p95_ms, double slo_ms, double alpha = 0.85);

// Initial instance count from two profiled latencies completed against
// catalog rows; falls back to the SLO check on the probes alone when no
// catalog rows are available.
int mt_init(double lat1_ms, double latn_ms, int n_probe,
            const std::vector<std::vector<double>>& catalog_rows, double slo_ms,
            int max_mtl, const CompletionOptions& opts = {});

}  // namespace dnnscaler
