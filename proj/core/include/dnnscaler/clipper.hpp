#pragma once

#include "dnnscaler/domain.hpp"

namespace dnnscaler {

// Additive-increase multiplicative-decrease batch sizing: climb by a fixed
// step while under the SLO, back off once by a fraction on the first
// violation and settle there, re-entering only on another violation.
struct ClipperState {
  int current_bs = 1;
  int abs_max_bs = 128;
  int step = 4;
  double backoff = 0.10;
  bool converged = false;
  LatencyWindow window{100};
};

ClipperState make_clipper(int abs_max_bs, size_t window_capacity = 100);

struct ClipperDecision {
  int previous_bs = 1;
  int new_bs = 1;
  bool changed = false;
  bool violated = false;
};

ClipperDecision clipper_step(ClipperState& st, double p95_ms, double slo_ms);

}  // namespace dnnscaler
