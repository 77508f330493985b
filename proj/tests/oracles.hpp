// Independent reference computations used by the tests. Nothing here calls
// into the library except for plain data types.
#ifndef CZL_TESTS_ORACLES_HPP
#define CZL_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

/// Gamma at a positive half-integer or integer x by the recursion
/// Gamma(x + 1) = x Gamma(x) from Gamma(1/2) = sqrt(pi), Gamma(1) = 1.
inline double gamma_half(double x) {
  double g = std::abs(x - std::round(x)) < 1e-12 ? 1.0 : std::sqrt(pi);
  for (double t = std::abs(x - std::round(x)) < 1e-12 ? 1.0 : 0.5; t < x - 1e-12; t += 1.0) g *= t;
  return g;
}

/// Riesz constant Gamma((m+1)/2) / pi^((m+1)/2).
inline double riesz_constant(int m) { return gamma_half((m + 1) / 2.0) / std::pow(pi, (m + 1) / 2.0); }

/// Closed form of sum_{k != 0} e^{-i k xi} / k on (-pi, pi].
inline cplx sawtooth(double xi) {
  if (xi == 0.0) return 0.0;
  return {0.0, -(xi > 0 ? 1.0 : -1.0) * (pi - std::abs(xi))};
}

/// Plain partial sum of the same series, sum over 1 <= k <= n.
inline cplx sawtooth_partial(double xi, int n) {
  double s = 0.0;
  for (int k = n; k >= 1; --k) s += std::sin(k * xi) / k;
  return {0.0, -2.0 * s};
}

/// Continuous symbol of a planar kernel with angular density omega, by
/// midpoint quadrature of
///   sigma(xi) = int_0^{2 pi} omega(theta) [-(i pi / 2) sgn(c) - log|c|] d theta,
///   c = cos(theta - phi),
/// split at the two zeros of c.
inline cplx pv_symbol_2d(const std::function<cplx(double)>& omega, double xi1, double xi2, int per_piece = 400000) {
  const double phi = std::atan2(xi2, xi1);
  cplx total = 0.0;
  for (int piece = 0; piece < 2; ++piece) {
    const double lo = phi - pi / 2 + piece * pi;
    const double step = pi / per_piece;
    for (int j = 0; j < per_piece; ++j) {
      const double th = lo + (j + 0.5) * step;
      const double c = std::cos(th - phi);
      total += omega(th) * cplx(-std::log(std::abs(c)), -(pi / 2) * (c > 0 ? 1.0 : -1.0)) * step;
    }
  }
  return total;
}

/// Winding of a closed sampled curve by summing principal arguments of
/// consecutive ratios, including the closing step.
inline double raw_turns(const std::vector<cplx>& curve) {
  double total = 0.0;
  for (std::size_t j = 0; j < curve.size(); ++j) total += std::arg(curve[(j + 1) % curve.size()] / curve[j]);
  return total / (2 * pi);
}

inline int winding(const std::vector<cplx>& curve) { return static_cast<int>(std::lround(raw_turns(curve))); }

/// Samples f(t) on t_j = -pi + 2 pi j / n.
inline std::vector<cplx> sample(std::size_t n, const std::function<cplx(double)>& f) {
  std::vector<cplx> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(-pi + 2 * pi * static_cast<double>(j) / static_cast<double>(n));
  return v;
}

/// Evaluates sum_k c_k e^{-i k t} for a short list of (k, c_k).
inline std::function<cplx(double)> trig(std::vector<std::pair<int, cplx>> terms) {
  return [terms](double t) {
    cplx s = 0.0;
    for (const auto& [k, c] : terms) s += c * std::polar(1.0, -k * t);
    return s;
  };
}

}  // namespace oracle

#endif  // CZL_TESTS_ORACLES_HPP
