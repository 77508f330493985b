#ifndef CZL_SYMBOL_HPP
#define CZL_SYMBOL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "czl/error.hpp"
#include "czl/fft.hpp"
#include "czl/format.hpp"
#include "czl/kernel.hpp"

namespace czl {

/// Truncation schedule for the cube partial sums. Radii are physical: at step
/// h the cube Q_N contains the lattice points h*y with max_k |y_k| <= N/h.
struct PartialSumPlan {
  std::vector<double> radii{16.0, 32.0};
  bool extrapolate = false;  // one Richardson step in 1/N on the last two radii
  double tolerance = 1e-4;   // convergence threshold on the last two partial sums

  void validate() const {
    if (radii.size() < 2) throw InputError("plan: need at least two truncation radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) {
        throw InputError("plan: truncation radii must be positive");
      }
      if (i > 0 && !(radii[i] > radii[i - 1])) {
        throw InputError("plan: truncation radii must be strictly increasing");
      }
    }
    if (!(tolerance > 0.0)) throw InputError("plan: tolerance must be positive");
  }

  /// Same plan with every radius multiplied by factor.
  PartialSumPlan scaled(double factor) const {
    PartialSumPlan p = *this;
    for (double& r : p.radii) r *= factor;
    return p;
  }
};

/// Integer cube radius of physical radius N at step h.
inline int lattice_radius(double radius, double h) {
  const double r = std::floor(radius / h + 1e-9);
  if (r < 1.0) throw InputError("plan: truncation radius smaller than one lattice step");
  if (r > 1e8) throw InputError("plan: truncation radius too large");
  return static_cast<int>(r);
}

struct SymbolSample {
  std::vector<double> xi;
  cplx value;
  double h = 1.0;
  double radius = 0.0;                // largest physical N used
  std::vector<cplx> partial_sums;     // a + S_N for every N of the plan
  double increment = 0.0;             // |S_last - S_prev|
  bool converged = true;
  bool jump_suspected = false;
};

namespace detail {

inline void check_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("symbol: lattice step must be positive");
}

inline void check_in_cell(std::span<const double> xi, double h) {
  const double bound = std::numbers::pi / h * (1 + 1e-12);
  for (double c : xi) {
    if (!(std::abs(c) <= bound)) {
      throw InputError("symbol: frequency outside the basic cell [-pi/h, pi/h]^m");
    }
  }
}

/// Visits every y in the cube max|y_k| <= radius, passing the point and its shell.
template <class F>
void for_each_cube_point(int dim, int radius, F&& visit) {
  std::vector<int> y(static_cast<std::size_t>(dim), -radius);
  while (true) {
    int shell = 0;
    for (int c : y) shell = std::max(shell, std::abs(c));
    visit(std::span<const int>(y), shell);
    int axis = dim - 1;
    while (axis >= 0 && y[static_cast<std::size_t>(axis)] == radius) {
      y[static_cast<std::size_t>(axis)] = -radius;
      --axis;
    }
    if (axis < 0) return;
    ++y[static_cast<std::size_t>(axis)];
  }
}

/// Like for_each_cube_point, restricted to points whose first nonzero
/// coordinate is positive; every nonzero point of the cube is hit exactly once
/// together with its mirror image.
template <class F>
void for_each_half_cube_point(int dim, int radius, F&& visit) {
  for_each_cube_point(dim, radius, [&](std::span<const int> y, int shell) {
    for (int c : y) {
      if (c > 0) {
        visit(y, shell);
        return;
      }
      if (c < 0) return;
    }
  });
}

inline double pow_int(double base, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

inline void finish_partial_sums(SymbolSample& s, const PartialSumPlan& plan) {
  const std::size_t n = s.partial_sums.size();
  const cplx last = s.partial_sums[n - 1];
  const cplx prev = s.partial_sums[n - 2];
  s.increment = std::abs(last - prev);
  s.converged = s.increment <= plan.tolerance;
  if (!s.converged) {
    // the last two sums oscillate rather than settle
    s.jump_suspected = n < 3 || s.increment >= 0.5 * std::abs(prev - s.partial_sums[n - 3]);
  }
  if (plan.extrapolate) {
    const double r1 = plan.radii[n - 2];
    const double r2 = plan.radii[n - 1];
    s.value = (r2 * last - r1 * prev) / (r2 - r1);
  } else {
    s.value = last;
  }
}

}  // namespace detail

/// sigma_h(xi) = a + sum over the cube Q_N of exp(-i xi.x) K(x) h^m, with
/// opposite lattice points paired before summation and shells added from the
/// origin outward.
inline SymbolSample discrete_symbol(const Kernel& k, cplx a, double h, std::span<const double> xi,
                                    const PartialSumPlan& plan = {}) {
  detail::check_step(h);
  plan.validate();
  const int m = k.dimension();
  if (static_cast<int>(xi.size()) != m) throw InputError("symbol: frequency has wrong dimension");
  detail::check_in_cell(xi, h);

  std::vector<int> radius(plan.radii.size());
  for (std::size_t i = 0; i < radius.size(); ++i) radius[i] = lattice_radius(plan.radii[i], h);
  const int rmax = radius.back();

  SymbolSample out;
  out.xi.assign(xi.begin(), xi.end());
  out.h = h;
  out.radius = plan.radii.back();

  std::vector<cplx> shell_sum(static_cast<std::size_t>(rmax) + 1, 0.0);
  if (!k.is_zero()) {
    // phase[axis][y + rmax] = exp(-i xi_axis * (h y))
    std::vector<std::vector<cplx>> phase(static_cast<std::size_t>(m));
    for (int ax = 0; ax < m; ++ax) {
      auto& row = phase[static_cast<std::size_t>(ax)];
      row.resize(2 * static_cast<std::size_t>(rmax) + 1);
      for (int y = -rmax; y <= rmax; ++y) {
        row[static_cast<std::size_t>(y + rmax)] = std::polar(1.0, -xi[static_cast<std::size_t>(ax)] * (h * y));
      }
    }
    const double hm = detail::pow_int(h, m);
    std::vector<double> x(static_cast<std::size_t>(m));
    std::vector<double> xneg(static_cast<std::size_t>(m));
    detail::for_each_half_cube_point(m, rmax, [&](std::span<const int> y, int shell) {
      cplx p = 1.0;
      for (int ax = 0; ax < m; ++ax) {
        const auto a_ = static_cast<std::size_t>(ax);
        x[a_] = h * y[a_];
        xneg[a_] = -x[a_];
        p *= phase[a_][static_cast<std::size_t>(y[a_] + rmax)];
      }
      shell_sum[static_cast<std::size_t>(shell)] += (k(x) * p + k(xneg) * std::conj(p)) * hm;
    });
  }

  cplx running = a;
  std::size_t next = 0;
  for (int s = 0; s <= rmax; ++s) {
    running += shell_sum[static_cast<std::size_t>(s)];
    while (next < radius.size() && radius[next] == s) {
      out.partial_sums.push_back(running);
      ++next;
    }
  }
  detail::finish_partial_sums(out, plan);
  return out;
}

/// Principal-value symbol sigma(xi) = a + p.v. integral of exp(-i xi.x) K(x) dx.
///
/// Riesz kernels use the closed form -i xi_j / |xi|. Tabulated densities use
/// the polar reduction
///   sigma(xi) = integral over S^{m-1} of Omega(theta) [-(i pi/2) sign(xi.theta) - log|xi.theta|],
/// evaluated exactly on the Fourier modes of Omega for m = 2.
inline cplx continuous_symbol(const Kernel& k, cplx a, std::span<const double> xi) {
  const int m = k.dimension();
  if (static_cast<int>(xi.size()) != m) throw InputError("symbol: frequency has wrong dimension");
  double norm2 = 0.0;
  for (double c : xi) norm2 += c * c;
  if (!(norm2 > 0.0)) throw InputError("symbol: continuous symbol is undefined at xi = 0");
  if (k.is_zero()) return a;
  const cplx i{0.0, 1.0};
  if (k.family() == KernelFamily::riesz) {
    return a - k.scale() * i * xi[static_cast<std::size_t>(k.riesz_index() - 1)] / std::sqrt(norm2);
  }
  if (m == 1) {
    const auto& om = k.density();
    const double sgn = xi[0] > 0 ? 1.0 : -1.0;
    return a - k.scale() * i * std::numbers::pi * sgn * 0.5 * (om[1] - om[0]);
  }
  const double phi = std::atan2(xi[1], xi[0]);
  const auto& modes = k.density_modes();
  cplx sum = 0.0;
  for (std::size_t p = 0; p < modes.size(); ++p) {
    const int mode = k.mode_number(p);
    if (mode == 0) continue;
    const int am = std::abs(mode);
    cplx factor = 0.0;
    if (am % 2 == 1) {
      const double s = ((am - 1) / 2 % 2 == 0 ? 4.0 : -4.0) / am;
      factor = -i * (std::numbers::pi / 2) * s;
    } else {
      const int n = am / 2;
      factor = std::numbers::pi * (n % 2 == 0 ? 1.0 : -1.0) / n;  // -L_k
    }
    sum += modes[p] * std::polar(1.0, mode * phi) * factor;
  }
  return a + k.scale() * sum;
}

/// Discrete symbol sampled on the uniform grid of the closed cell
/// [-pi/h, pi/h]^m, with resolution + 1 points per axis (both endpoints).
struct SymbolGrid {
  int dimension = 1;
  double h = 1.0;
  int resolution = 2;
  cplx constant_a = 0.0;
  double radius = 0.0;
  std::vector<cplx> values;       // row-major, last axis fastest
  std::vector<char> converged;    // per point
  std::vector<double> increment;  // per point |S_last - S_prev|

  int points_per_axis() const noexcept { return resolution + 1; }

  double xi_at(int index) const {
    return -std::numbers::pi / h + 2 * std::numbers::pi / h * index / resolution;
  }

  std::size_t flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int c : idx) f = f * static_cast<std::size_t>(points_per_axis()) + static_cast<std::size_t>(c);
    return f;
  }

  cplx at(std::span<const int> idx) const { return values[flat(idx)]; }

  std::vector<int> unflatten(std::size_t f) const {
    std::vector<int> idx(static_cast<std::size_t>(dimension));
    for (int ax = dimension - 1; ax >= 0; --ax) {
      idx[static_cast<std::size_t>(ax)] = static_cast<int>(f % static_cast<std::size_t>(points_per_axis()));
      f /= static_cast<std::size_t>(points_per_axis());
    }
    return idx;
  }

  bool all_converged() const {
    return std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });
  }

  /// CSV with header xi_1..xi_m,re,im,N,flags.
  void write_csv(std::ostream& os) const {
    for (int ax = 0; ax < dimension; ++ax) os << "xi_" << ax + 1 << ',';
    os << "re,im,N,flags\n";
    for (std::size_t f = 0; f < values.size(); ++f) {
      for (int c : unflatten(f)) os << fmt17(xi_at(c)) << ',';
      os << fmt17(values[f].real()) << ',' << fmt17(values[f].imag()) << ',' << fmt17(radius) << ','
         << (converged[f] ? "ok" : "nonconverged") << '\n';
    }
  }
};

/// All grid values at once: the kernel samples on Q_N are folded modulo the
/// resolution and one multidimensional FFT per truncation radius replaces
/// the per-point sums.
inline SymbolGrid sample_symbol_grid(const Kernel& k, cplx a, double h, int resolution,
                                     const PartialSumPlan& plan = {}) {
  detail::check_step(h);
  plan.validate();
  if (resolution < 2 || resolution % 2 != 0) throw InputError("symbol grid: resolution must be even and >= 2");
  const int m = k.dimension();
  std::vector<int> radius(plan.radii.size());
  for (std::size_t i = 0; i < radius.size(); ++i) radius[i] = lattice_radius(plan.radii[i], h);
  const int rmax = radius.back();

  std::size_t cells = 1;
  for (int ax = 0; ax < m; ++ax) cells *= static_cast<std::size_t>(resolution);
  std::vector<std::vector<cplx>> bins(radius.size(), std::vector<cplx>(cells, 0.0));

  if (!k.is_zero()) {
    const double hm = detail::pow_int(h, m);
    std::vector<double> x(static_cast<std::size_t>(m));
    detail::for_each_cube_point(m, rmax, [&](std::span<const int> y, int shell) {
      if (shell == 0) return;
      std::size_t f = 0;
      int parity = 0;
      for (int ax = 0; ax < m; ++ax) {
        const int c = y[static_cast<std::size_t>(ax)];
        x[static_cast<std::size_t>(ax)] = h * c;
        parity += c;
        const int wrapped = ((c % resolution) + resolution) % resolution;
        f = f * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(wrapped);
      }
      // the grid starts at -pi/h, contributing exp(i pi y) = (-1)^y
      const cplx v = k(x) * hm * ((parity & 1) ? -1.0 : 1.0);
      for (std::size_t i = 0; i < radius.size(); ++i) {
        if (shell <= radius[i]) bins[i][f] += v;
      }
    });
    std::vector<int> dims(static_cast<std::size_t>(m), resolution);
    for (auto& b : bins) fft::transform(b, dims, fft::Direction::forward);
  }

  SymbolGrid grid;
  grid.dimension = m;
  grid.h = h;
  grid.resolution = resolution;
  grid.constant_a = a;
  grid.radius = plan.radii.back();
  std::size_t total = 1;
  for (int ax = 0; ax < m; ++ax) total *= static_cast<std::size_t>(resolution + 1);
  grid.values.resize(total);
  grid.converged.resize(total);
  grid.increment.resize(total);
  for (std::size_t f = 0; f < total; ++f) {
    const std::vector<int> idx = grid.unflatten(f);
    std::size_t cell = 0;
    for (int c : idx) cell = cell * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(c % resolution);
    SymbolSample s;
    for (const auto& b : bins) s.partial_sums.push_back(a + b[cell]);
    detail::finish_partial_sums(s, plan);
    grid.values[f] = s.value;
    grid.converged[f] = s.converged ? 1 : 0;
    grid.increment[f] = s.increment;
  }
  return grid;
}

/// Discrete symbol along one xi_m slice at fixed lateral frequency xi'.
struct SymbolSlice {
  std::vector<double> xi_prime;
  double h = 1.0;
  int resolution = 0;
  std::vector<cplx> values;  // at xi_m = -pi/h + 2 pi j / (resolution h), j = 0..resolution
  double max_increment = 0.0;
  bool converged = true;

  double xi_m(int j) const { return -std::numbers::pi / h + 2 * std::numbers::pi / h * j / resolution; }
};

/// The kernel is first summed against exp(-i xi'.x') over the lateral part of
/// the cube, leaving a one-dimensional lattice sequence in y_m whose Fourier
/// series is evaluated by one FFT. The closing value at xi_m = +pi/h is
/// summed directly, so its agreement with the opening value is a real check.
inline SymbolSlice discrete_symbol_slice(const Kernel& k, cplx a, double h,
                                         std::span<const double> xi_prime, int resolution,
                                         const PartialSumPlan& plan = {}) {
  detail::check_step(h);
  plan.validate();
  const int m = k.dimension();
  if (static_cast<int>(xi_prime.size()) != m - 1) throw InputError("slice: lateral frequency has wrong dimension");
  detail::check_in_cell(xi_prime, h);
  if (resolution < 2) throw InputError("slice: resolution must be >= 2");
  std::vector<int> radius(plan.radii.size());
  for (std::size_t i = 0; i < radius.size(); ++i) radius[i] = lattice_radius(plan.radii[i], h);
  const int rmax = radius.back();
  const std::size_t width = 2 * static_cast<std::size_t>(rmax) + 1;

  std::vector<std::vector<cplx>> line(radius.size(), std::vector<cplx>(width, 0.0));
  if (!k.is_zero()) {
    const double hm = detail::pow_int(h, m);
    std::vector<double> x(static_cast<std::size_t>(m));
    detail::for_each_cube_point(m, rmax, [&](std::span<const int> y, int shell) {
      if (shell == 0) return;
      double lateral_phase = 0.0;
      for (int ax = 0; ax < m; ++ax) {
        x[static_cast<std::size_t>(ax)] = h * y[static_cast<std::size_t>(ax)];
        if (ax < m - 1) lateral_phase -= xi_prime[static_cast<std::size_t>(ax)] * x[static_cast<std::size_t>(ax)];
      }
      const cplx v = k(x) * hm * std::polar(1.0, lateral_phase);
      const auto slot = static_cast<std::size_t>(y[static_cast<std::size_t>(m - 1)] + rmax);
      for (std::size_t i = 0; i < radius.size(); ++i) {
        if (shell <= radius[i]) line[i][slot] += v;
      }
    });
  }

  SymbolSlice out;
  out.xi_prime.assign(xi_prime.begin(), xi_prime.end());
  out.h = h;
  out.resolution = resolution;
  std::vector<std::vector<cplx>> series(radius.size(), std::vector<cplx>(static_cast<std::size_t>(resolution), 0.0));
  std::vector<cplx> closing(radius.size(), 0.0);
  for (std::size_t i = 0; i < radius.size(); ++i) {
    for (int y = -rmax; y <= rmax; ++y) {
      const cplx v = line[i][static_cast<std::size_t>(y + rmax)];
      if (v == 0.0) continue;
      const int wrapped = ((y % resolution) + resolution) % resolution;
      series[i][static_cast<std::size_t>(wrapped)] += (y % 2 == 0) ? v : -v;
      closing[i] += v * std::polar(1.0, -std::numbers::pi * y);
    }
    fft::transform(series[i], fft::Direction::forward);
  }
  out.values.resize(static_cast<std::size_t>(resolution) + 1);
  for (int j = 0; j <= resolution; ++j) {
    SymbolSample s;
    for (std::size_t i = 0; i < radius.size(); ++i) {
      s.partial_sums.push_back(a + (j < resolution ? series[i][static_cast<std::size_t>(j)] : closing[i]));
    }
    detail::finish_partial_sums(s, plan);
    out.values[static_cast<std::size_t>(j)] = s.value;
    out.max_increment = std::max(out.max_increment, s.increment);
    out.converged = out.converged && s.converged;
  }
  return out;
}

struct Lemma1Row {
  double h = 1.0;
  cplx discrete;
  cplx continuous;
  double error = 0.0;
};

struct Lemma1Report {
  std::vector<double> xi;
  std::vector<Lemma1Row> rows;
  bool monotone = true;  // strictly decreasing error column
};

/// |sigma_h(xi) - sigma(xi)| along a decreasing schedule of steps.
inline Lemma1Report lemma1_convergence_report(const Kernel& k, std::span<const double> xi,
                                              std::span<const double> h_schedule,
                                              const PartialSumPlan& plan = {}) {
  if (h_schedule.empty()) throw InputError("convergence report: empty step schedule");
  for (std::size_t i = 1; i < h_schedule.size(); ++i) {
    if (!(h_schedule[i] < h_schedule[i - 1])) throw InputError("convergence report: step schedule must decrease");
  }
  detail::check_in_cell(xi, h_schedule.front());
  Lemma1Report rep;
  rep.xi.assign(xi.begin(), xi.end());
  const cplx sigma = continuous_symbol(k, 0.0, xi);
  for (double h : h_schedule) {
    Lemma1Row row;
    row.h = h;
    row.discrete = discrete_symbol(k, 0.0, h, xi, plan).value;
    row.continuous = sigma;
    row.error = std::abs(row.discrete - sigma);
    if (!rep.rows.empty() && !(row.error < rep.rows.back().error)) rep.monotone = false;
    rep.rows.push_back(row);
  }
  if (k.is_zero()) rep.monotone = true;  // an all-zero column is trivially convergent
  return rep;
}

}  // namespace czl

#endif  // CZL_SYMBOL_HPP
