#ifndef CZL_PHASE_HPP
#define CZL_PHASE_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "czl/error.hpp"

namespace czl {

using cplx = std::complex<double>;

/// Continuous argument of a closed sampled curve.
struct PhaseTrace {
  std::vector<double> phase;  // unwrapped arg at each sample
  double total = 0.0;         // full variation including the closing step
  double max_step = 0.0;      // largest |phase increment|, closing step included
  double min_modulus = 0.0;
};

/// Unwraps arg(z_j) along the sequence, taking every increment in (-pi, pi],
/// then adds the closing increment from the last sample back to the first.
inline PhaseTrace unwrap_closed(std::span<const cplx> curve) {
  PhaseTrace trace;
  if (curve.empty()) return trace;
  trace.phase.reserve(curve.size());
  trace.min_modulus = std::abs(curve.front());
  trace.phase.push_back(std::arg(curve.front()));
  auto step = [](cplx from, cplx to) { return std::arg(to / from); };
  for (std::size_t j = 1; j < curve.size(); ++j) {
    trace.min_modulus = std::min(trace.min_modulus, std::abs(curve[j]));
    const double d = step(curve[j - 1], curve[j]);
    trace.max_step = std::max(trace.max_step, std::abs(d));
    trace.phase.push_back(trace.phase.back() + d);
  }
  const double closing = step(curve.back(), curve.front());
  trace.max_step = std::max(trace.max_step, std::abs(closing));
  trace.total = trace.phase.back() + closing - trace.phase.front();
  return trace;
}

struct WindingOptions {
  double integer_tolerance = 0.05;  // allowed |total/2pi - nearest integer|
  double max_step = std::numbers::pi / 2;
  double min_modulus = 1e-12;
};

/// Integer winding number about the origin of a closed sampled curve.
/// Throws WindingError when the curve (nearly) hits the origin, when a single
/// phase increment is too large to be trusted, or when the variation is not
/// near an integer multiple of 2 pi.
inline int resolve_winding(const PhaseTrace& trace, const WindingOptions& opt = {}) {
  if (!(trace.min_modulus >= opt.min_modulus)) {
    throw WindingError("winding unresolved: curve passes within " +
                       std::to_string(trace.min_modulus) + " of the origin");
  }
  if (trace.max_step > opt.max_step) {
    throw WindingError("winding unresolved: phase step " + std::to_string(trace.max_step) +
                       " exceeds " + std::to_string(opt.max_step) + " (under-resolved curve)");
  }
  const double turns = trace.total / (2 * std::numbers::pi);
  const double nearest = std::round(turns);
  if (!(std::abs(turns - nearest) < opt.integer_tolerance)) {
    throw WindingError("winding unresolved: variation " + std::to_string(turns) +
                       " turns is not near an integer");
  }
  return static_cast<int>(nearest);
}

inline int winding_number(std::span<const cplx> curve, const WindingOptions& opt = {}) {
  return resolve_winding(unwrap_closed(curve), opt);
}

}  // namespace czl

#endif  // CZL_PHASE_HPP
