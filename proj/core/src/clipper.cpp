#include "dnnscaler/clipper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dnnscaler {

ClipperState make_clipper(int abs_max_bs, size_t window_capacity) {
  if (abs_max_bs < 1) throw std::invalid_argument("invalid batch size limit");
  ClipperState st;
  st.abs_max_bs = abs_max_bs;
  st.window = LatencyWindow(window_capacity);
  return st;
}

ClipperDecision clipper_step(ClipperState& st, double p95_ms, double slo_ms) {
  if (!(slo_ms > 0.0)) throw std::invalid_argument("invalid slo");
  ClipperDecision d;
  d.previous_bs = st.current_bs;
  d.violated = p95_ms > slo_ms;

  if (d.violated) {
    st.current_bs = std::max(
        1, static_cast<int>(std::floor(st.current_bs * (1.0 - st.backoff))));
    st.converged = true;
  } else if (!st.converged) {
    st.current_bs = std::min(st.abs_max_bs, st.current_bs + st.step);
  }

  d.new_bs = st.current_bs;
  d.changed = d.new_bs != d.previous_bs;
  if (d.changed) st.window.clear();
  return d;
}

}  // namespace dnnscaler
