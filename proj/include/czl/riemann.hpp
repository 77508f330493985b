#ifndef CZL_RIEMANN_HPP
#define CZL_RIEMANN_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "czl/error.hpp"
#include "czl/fft.hpp"
#include "czl/phase.hpp"

namespace czl {

/// Samples of a 2 pi-periodic function at t_j = -pi + 2 pi j / n.
///
/// Fourier coefficients follow the discrete-variable transform
///   u_hat(t) = sum_k c_k exp(-i k t),
/// so c_k is the value of the lattice function at k. Coefficient vectors are
/// stored in FFT order: slot p holds k = p for p < n/2 and k = p - n above;
/// the Nyquist slot k = -n/2 therefore belongs to the minus side.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;

  explicit PeriodicGrid(std::vector<cplx> values) : values_(std::move(values)) {
    const std::size_t n = values_.size();
    if (n < 8 || (n & (n - 1)) != 0) throw InputError("periodic grid: size must be a power of two >= 8");
    for (const cplx& v : values_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw InputError("periodic grid: non-finite sample");
      }
    }
  }

  static PeriodicGrid sample(std::size_t n, const std::function<cplx(double)>& f) {
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = f(node(n, j));
    return PeriodicGrid(std::move(v));
  }

  static PeriodicGrid constant(std::size_t n, cplx c) { return PeriodicGrid(std::vector<cplx>(n, c)); }

  static double node(std::size_t n, std::size_t j) {
    return -std::numbers::pi + 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  }

  std::size_t size() const noexcept { return values_.size(); }
  double t(std::size_t j) const { return node(size(), j); }
  const std::vector<cplx>& values() const noexcept { return values_; }
  cplx operator[](std::size_t j) const { return values_[j]; }

  /// Mode number stored in FFT slot p.
  static int mode(std::size_t n, std::size_t p) {
    return p < n / 2 ? static_cast<int>(p) : static_cast<int>(p) - static_cast<int>(n);
  }

  /// c_k = (1/n) sum_j u(t_j) exp(i k t_j), in FFT order.
  std::vector<cplx> coefficients() const {
    std::vector<cplx> c = values_;
    fft::transform(c, fft::Direction::backward);
    const double inv = 1.0 / static_cast<double>(size());
    for (std::size_t p = 0; p < c.size(); ++p) {
      // exp(i k t_j) = (-1)^k exp(2 pi i j k / n)
      c[p] *= (mode(size(), p) % 2 == 0) ? inv : -inv;
    }
    return c;
  }

  static PeriodicGrid from_coefficients(std::vector<cplx> c) {
    const std::size_t n = c.size();
    for (std::size_t p = 0; p < n; ++p) {
      if (mode(n, p) % 2 != 0) c[p] = -c[p];
    }
    fft::transform(c, fft::Direction::forward);
    return PeriodicGrid(std::move(c));
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  friend PeriodicGrid operator*(const PeriodicGrid& x, const PeriodicGrid& y) {
    return zip(x, y, [](cplx p, cplx q) { return p * q; });
  }
  friend PeriodicGrid operator/(const PeriodicGrid& x, const PeriodicGrid& y) {
    return zip(x, y, [](cplx p, cplx q) { return p / q; });
  }
  friend PeriodicGrid operator+(const PeriodicGrid& x, const PeriodicGrid& y) {
    return zip(x, y, [](cplx p, cplx q) { return p + q; });
  }
  friend PeriodicGrid operator-(const PeriodicGrid& x, const PeriodicGrid& y) {
    return zip(x, y, [](cplx p, cplx q) { return p - q; });
  }

  template <class F>
  PeriodicGrid map(F&& f) const {
    std::vector<cplx> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), f);
    return PeriodicGrid(std::move(v));
  }

 private:
  template <class F>
  static PeriodicGrid zip(const PeriodicGrid& x, const PeriodicGrid& y, F&& f) {
    if (x.size() != y.size()) throw InputError("periodic grid: size mismatch");
    std::vector<cplx> v(x.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(x.values_[j], y.values_[j]);
    return PeriodicGrid(std::move(v));
  }

  std::vector<cplx> values_;
};

inline double max_distance(const PeriodicGrid& x, const PeriodicGrid& y) { return (x - y).max_abs(); }

/// Keeps the coefficients with k >= 0: multiplication of the lattice function
/// by the indicator of Z_+ = {0, 1, 2, ...}.
inline PeriodicGrid project_plus_coeff(const PeriodicGrid& u) {
  std::vector<cplx> c = u.coefficients();
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (PeriodicGrid::mode(c.size(), p) < 0) c[p] = 0.0;
  }
  return PeriodicGrid::from_coefficients(std::move(c));
}

/// The plus projection in Sokhotskii form,
///   u(xi)/2 + (1/4pi) int u dt + (1/4pi i) p.v. int u(t) cot((xi - t)/2) dt,
/// with both integrals evaluated by quadrature on the samples. The principal
/// value uses the alternating-point trapezoidal rule (only nodes at odd
/// offsets from xi), which is exact for trigonometric polynomials of degree
/// below n/2.
inline PeriodicGrid project_plus_cot(const PeriodicGrid& u) {
  const std::size_t n = u.size();
  const double step = 2 * std::numbers::pi / static_cast<double>(n);
  // weight[d] = 2 step cot(d step / 2) for odd offsets d
  std::vector<double> weight(n, 0.0);
  for (std::size_t d = 1; d < n; d += 2) weight[d] = 2 * step / std::tan(0.5 * step * static_cast<double>(d));
  cplx mean = 0.0;
  for (const cplx& v : u.values()) mean += v;
  const cplx integral = mean * step;
  const cplx denom{0.0, 4 * std::numbers::pi};
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx pv = 0.0;
    for (std::size_t d = 1; d < n; d += 2) pv += weight[d] * u[(j + n - d) % n];
    out[j] = 0.5 * u[j] + integral / (4 * std::numbers::pi) + pv / denom;
  }
  return PeriodicGrid(std::move(out));
}

/// Complement of the plus projection: coefficients with k <= -1.
inline PeriodicGrid project_minus(const PeriodicGrid& u) { return u - project_plus_coeff(u); }

/// Index kappa = (1/2pi) times the variation of arg G over one period.
inline int compute_index(std::span<const cplx> samples, const WindingOptions& opt = {}) {
  return winding_number(samples, opt);
}

inline int compute_index(const PeriodicGrid& g, const WindingOptions& opt = {}) {
  return compute_index(std::span<const cplx>(g.values()), opt);
}

/// Continuous logarithm log|G| + i arg G along the period, with the argument
/// unwrapped from the first sample.
inline PeriodicGrid continuous_log(const PeriodicGrid& g) {
  const PhaseTrace trace = unwrap_closed(g.values());
  std::vector<cplx> out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = {std::log(std::abs(g[j])), trace.phase[j]};
  return PeriodicGrid(std::move(out));
}

struct Factorization {
  PeriodicGrid x_plus;   // exp of the k >= 0 part of log G
  PeriodicGrid x_minus;  // exp of the k <= -1 part of log G
  int kappa = 0;
};

/// G = X+ X- with log X+ carrying the modes k >= 0 (the mean included) and
/// log X- the modes k <= -1. Requires index zero.
inline Factorization factorize(const PeriodicGrid& g) {
  const int kappa = compute_index(g);
  if (kappa != 0) throw IndexObstruction(kappa);
  double lo = std::abs(g[0]);
  double hi = lo;
  for (const cplx& v : g.values()) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (hi > 1e12 * lo) throw WindingError("factorize: |G| dynamic range exceeds 1e12, log branch unreliable");
  const PeriodicGrid log_g = continuous_log(g);
  auto exp_of = [](const PeriodicGrid& x) { return x.map([](cplx v) { return std::exp(v); }); };
  return {exp_of(project_plus_coeff(log_g)), exp_of(project_minus(log_g)), 0};
}

/// Largest coefficient of log X on the side where it should vanish:
/// k < 0 for a plus factor, k > 0 for a minus factor.
inline double analyticity_defect(const PeriodicGrid& x, bool plus_factor) {
  const std::vector<cplx> c = continuous_log(x).coefficients();
  double worst = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const int k = PeriodicGrid::mode(c.size(), p);
    if ((plus_factor && k < 0) || (!plus_factor && k > 0)) worst = std::max(worst, std::abs(c[p]));
  }
  return worst;
}

/// Phi+ = G Phi- + g on [-pi, pi].
class RiemannProblem {
 public:
  RiemannProblem(PeriodicGrid coefficient, PeriodicGrid rhs)
      : g_coef_(std::move(coefficient)), rhs_(std::move(rhs)) {
    if (g_coef_.size() != rhs_.size()) throw InputError("riemann: coefficient and right-hand side sizes differ");
    kappa_ = compute_index(g_coef_);
  }

  const PeriodicGrid& coefficient() const noexcept { return g_coef_; }
  const PeriodicGrid& rhs() const noexcept { return rhs_; }
  int kappa() const noexcept { return kappa_; }

 private:
  PeriodicGrid g_coef_;
  PeriodicGrid rhs_;
  int kappa_ = 0;
};

struct RiemannSolution {
  PeriodicGrid phi_plus;   // modes k >= 0
  PeriodicGrid phi_minus;  // modes k <= -1
  Factorization factors;
  double residual = 0.0;   // max |Phi+ - G Phi- - g|
};

/// Index-zero solve through the canonical factorization:
///   Phi+ = X+ P+(g / X+),  Phi- = -P-(g / X+) / X-.
inline RiemannSolution solve_riemann(const RiemannProblem& p) {
  if (p.kappa() != 0) throw IndexObstruction(p.kappa());
  RiemannSolution s;
  s.factors = factorize(p.coefficient());
  const PeriodicGrid q = p.rhs() / s.factors.x_plus;
  s.phi_plus = s.factors.x_plus * project_plus_coeff(q);
  s.phi_minus = project_minus(q).map([](cplx v) { return -v; }) / s.factors.x_minus;
  s.residual = (s.phi_plus - p.coefficient() * s.phi_minus - p.rhs()).max_abs();
  return s;
}

}  // namespace czl

#endif  // CZL_RIEMANN_HPP
