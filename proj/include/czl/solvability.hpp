#ifndef CZL_SOLVABILITY_HPP
#define CZL_SOLVABILITY_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "czl/error.hpp"
#include "czl/format.hpp"
#include "czl/kernel.hpp"
#include "czl/phase.hpp"
#include "czl/riemann.hpp"
#include "czl/symbol.hpp"

namespace czl {

struct TransmissionReport {
  cplx sigma_south;  // a + sigma(0, ..., 0, -1)
  cplx sigma_north;  // a + sigma(0, ..., 0, +1)
  double defect = 0.0;
  bool passed = true;
};

inline constexpr double transmission_tolerance = 1e-8;

/// Compares the continuous symbol at the two poles of the sphere.
inline TransmissionReport transmission_check(const Kernel& k, cplx a) {
  const int m = k.dimension();
  std::vector<double> pole(static_cast<std::size_t>(m), 0.0);
  TransmissionReport rep;
  pole.back() = -1.0;
  rep.sigma_south = continuous_symbol(k, a, pole);
  pole.back() = 1.0;
  rep.sigma_north = continuous_symbol(k, a, pole);
  rep.defect = std::abs(rep.sigma_north - rep.sigma_south);
  rep.passed = rep.defect <= transmission_tolerance;
  return rep;
}

enum class SliceMode { discrete, continuous };

/// The closed curve a + sigma(xi', .) traced in increasing xi_m, and its winding.
struct SliceWindingReport {
  std::vector<double> xi_prime;
  SliceMode mode = SliceMode::discrete;
  double h = 0.0;                // discrete mode only
  std::vector<cplx> curve;       // sampled symbol values in traversal order
  std::vector<double> phase_trace;
  double raw_turns = 0.0;        // phase variation / 2 pi
  int winding = 0;
  double closure_gap = 0.0;
  double min_modulus = 0.0;
};

namespace detail {

inline double relative_floor(std::span<const cplx> curve) {
  double hi = 0.0;
  for (const cplx& v : curve) hi = std::max(hi, std::abs(v));
  return 1e-10 * std::max(1.0, hi);
}

inline void resolve_slice(SliceWindingReport& rep, const WindingOptions& opt) {
  const PhaseTrace trace = unwrap_closed(rep.curve);
  rep.phase_trace = trace.phase;
  rep.raw_turns = trace.total / (2 * std::numbers::pi);
  rep.min_modulus = trace.min_modulus;
  if (trace.min_modulus < relative_floor(rep.curve)) {
    throw EllipticityError("symbol vanishes on slice (min |a + sigma| = " + std::to_string(trace.min_modulus) + ")");
  }
  rep.winding = resolve_winding(trace, opt);
}

inline void check_lateral(std::span<const double> xi_prime, int m) {
  if (m < 2) throw InputError("continuous winding needs m >= 2 (a lateral frequency)");
  if (static_cast<int>(xi_prime.size()) != m - 1) throw InputError("slice: lateral frequency has wrong dimension");
  double n2 = 0.0;
  for (double c : xi_prime) n2 += c * c;
  if (!(n2 > 0.0)) throw InputError("slice: lateral frequency must be nonzero");
}

}  // namespace detail

/// Winding of a + sigma(xi', xi_m) over xi_m in R, compactified by
/// xi_m = tan(s) on an open uniform grid of (-pi/2, pi/2) and closed through
/// the common pole value.
inline SliceWindingReport continuous_winding(const Kernel& k, cplx a, std::span<const double> xi_prime,
                                             int resolution, const WindingOptions& opt = {}) {
  const int m = k.dimension();
  detail::check_lateral(xi_prime, m);
  if (resolution < 8) throw InputError("continuous winding: resolution must be >= 8");
  const TransmissionReport tr = transmission_check(k, a);
  if (!tr.passed) {
    throw InputError("continuous winding: transmission property fails (defect " + std::to_string(tr.defect) +
                     "), the slice curve does not close at infinity");
  }
  SliceWindingReport rep;
  rep.mode = SliceMode::continuous;
  rep.xi_prime.assign(xi_prime.begin(), xi_prime.end());
  rep.closure_gap = tr.defect;
  std::vector<double> xi(static_cast<std::size_t>(m));
  std::copy(xi_prime.begin(), xi_prime.end(), xi.begin());
  rep.curve.reserve(static_cast<std::size_t>(resolution) + 1);
  for (int j = 0; j < resolution; ++j) {
    const double s = -std::numbers::pi / 2 + std::numbers::pi * (j + 0.5) / resolution;
    xi.back() = std::tan(s);
    rep.curve.push_back(continuous_symbol(k, a, xi));
  }
  rep.curve.push_back(tr.sigma_north);
  detail::resolve_slice(rep, opt);
  return rep;
}

/// Winding of a + sigma_h(xi', xi_m) over one period xi_m in [-pi/h, pi/h).
inline SliceWindingReport discrete_winding(const Kernel& k, cplx a, double h, std::span<const double> xi_prime,
                                           int resolution, const PartialSumPlan& plan = {},
                                           const WindingOptions& opt = {}) {
  const SymbolSlice slice = discrete_symbol_slice(k, a, h, xi_prime, resolution, plan);
  SliceWindingReport rep;
  rep.mode = SliceMode::discrete;
  rep.h = h;
  rep.xi_prime.assign(xi_prime.begin(), xi_prime.end());
  rep.curve.assign(slice.values.begin(), slice.values.end() - 1);
  rep.closure_gap = std::abs(slice.values.back() - slice.values.front());
  detail::resolve_slice(rep, opt);
  return rep;
}

/// Riemann coefficient G = sigma_M1 / sigma_M2 of the paired operator
/// M1 P+ + M2 P- along one slice.
struct PairedCoefficient {
  std::vector<cplx> sigma_m1;
  std::vector<cplx> sigma_m2;
  std::vector<cplx> coefficient;

  int index(const WindingOptions& opt = {}) const { return compute_index(coefficient, opt); }
};

inline PairedCoefficient paired_coefficient(std::span<const cplx> sigma1, std::span<const cplx> sigma2) {
  if (sigma1.size() != sigma2.size()) throw InputError("paired coefficient: slice lengths differ");
  PairedCoefficient pc;
  pc.sigma_m1.assign(sigma1.begin(), sigma1.end());
  pc.sigma_m2.assign(sigma2.begin(), sigma2.end());
  pc.coefficient.resize(sigma1.size());
  for (std::size_t j = 0; j < sigma1.size(); ++j) {
    if (std::abs(sigma2[j]) < 1e-12) throw EllipticityError("paired coefficient: sigma_M2 vanishes on the slice");
    pc.coefficient[j] = sigma1[j] / sigma2[j];
  }
  return pc;
}

struct AgreementCell {
  std::vector<double> xi_prime;
  double h = 0.0;
  std::optional<int> discrete;
  std::optional<int> continuous;
  std::string error;
  bool equal = false;
};

struct MainTheoremReport {
  TransmissionReport transmission;
  std::vector<AgreementCell> cells;
  bool agrees = false;

  /// Columns xi', h, winding_h, winding_cont, equal. Lateral components are
  /// joined with ':' for m >= 3.
  void write_csv(std::ostream& os) const {
    os << "xi_prime,h,winding_h,winding_cont,equal\n";
    for (const AgreementCell& c : cells) {
      for (std::size_t i = 0; i < c.xi_prime.size(); ++i) os << (i ? ":" : "") << fmt17(c.xi_prime[i]);
      os << ',' << fmt17(c.h) << ',' << (c.discrete ? std::to_string(*c.discrete) : "NA") << ','
         << (c.continuous ? std::to_string(*c.continuous) : "NA") << ',' << (c.equal ? "yes" : "no") << '\n';
    }
  }

  void write_text(std::ostream& os) const {
    os << "transmission: south " << format_complex(transmission.sigma_south) << ", north "
       << format_complex(transmission.sigma_north) << ", defect " << fmt17(transmission.defect)
       << (transmission.passed ? " (pass)\n" : " (FAIL)\n");
    for (const AgreementCell& c : cells) {
      os << "  xi'=";
      for (std::size_t i = 0; i < c.xi_prime.size(); ++i) os << (i ? ":" : "") << c.xi_prime[i];
      os << " h=" << c.h << "  discrete=" << (c.discrete ? std::to_string(*c.discrete) : "-")
         << " continuous=" << (c.continuous ? std::to_string(*c.continuous) : "-") << (c.equal ? "  equal" : "  UNEQUAL");
      if (!c.error.empty()) os << "  [" << c.error << ']';
      os << '\n';
    }
    os << "verdict: " << (agrees ? "agrees" : (transmission.passed ? "disagrees" : "transmission failed")) << '\n';
  }
};

/// Discrete windings at every (h, xi') against the continuous winding at xi'.
/// Slice errors are recorded per cell; a failing transmission check stops the
/// table before any winding is computed.
inline MainTheoremReport main_theorem_report(const Kernel& k, cplx a, std::span<const double> h_schedule,
                                             const std::vector<std::vector<double>>& xi_prime_set, int resolution,
                                             const PartialSumPlan& plan = {}) {
  MainTheoremReport rep;
  rep.transmission = transmission_check(k, a);
  if (!rep.transmission.passed) return rep;
  rep.agrees = true;
  for (const auto& xp : xi_prime_set) {
    std::optional<int> cont;
    std::string cont_error;
    try {
      cont = continuous_winding(k, a, xp, resolution).winding;
    } catch (const Error& e) {
      cont_error = e.what();
    }
    for (double h : h_schedule) {
      AgreementCell cell;
      cell.xi_prime = xp;
      cell.h = h;
      cell.continuous = cont;
      cell.error = cont_error;
      try {
        cell.discrete = discrete_winding(k, a, h, xp, resolution, plan).winding;
      } catch (const Error& e) {
        cell.error += (cell.error.empty() ? "" : "; ") + std::string(e.what());
      }
      cell.equal = cell.discrete && cell.continuous && *cell.discrete == *cell.continuous;
      rep.agrees = rep.agrees && cell.equal;
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

}  // namespace czl

#endif  // CZL_SOLVABILITY_HPP
