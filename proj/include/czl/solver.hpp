#ifndef CZL_SOLVER_HPP
#define CZL_SOLVER_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "czl/error.hpp"
#include "czl/fft.hpp"
#include "czl/gmres.hpp"
#include "czl/kernel.hpp"
#include "czl/riemann.hpp"
#include "czl/symbol.hpp"

namespace czl {

/// Equation a u(x) + h^m sum_y K(x - y) u(y) = v(x) on a truncated discrete
/// half-space. The box has 2L nodes per lateral axis, y_j in [-L, L-1],
/// wrapped periodically, and D depth layers y_m = 1..D. Grids are row-major
/// with the lateral axes first and depth fastest.
class HalfSpaceProblem {
 public:
  HalfSpaceProblem(Kernel kernel, double h, cplx a, int lateral_half, int depth, std::vector<cplx> rhs = {})
      : kernel_(std::move(kernel)), h_(h), a_(a), half_(lateral_half), depth_(depth) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InputError("half-space problem: step must be positive");
    if (depth < 2) throw InputError("half-space problem: depth D must be >= 2");
    if (kernel_.dimension() > 1 && lateral_half < 2) throw InputError("half-space problem: lateral extent L must be >= 2");
    if (kernel_.dimension() == 1) half_ = 0;
    if (rhs.empty()) rhs.assign(size(), 0.0);
    set_rhs(std::move(rhs));
  }

  const Kernel& kernel() const noexcept { return kernel_; }
  int dimension() const noexcept { return kernel_.dimension(); }
  double h() const noexcept { return h_; }
  cplx a() const noexcept { return a_; }
  int lateral_half() const noexcept { return half_; }
  int lateral_nodes() const noexcept { return 2 * half_; }
  int depth() const noexcept { return depth_; }
  const std::vector<cplx>& rhs() const noexcept { return rhs_; }

  void set_rhs(std::vector<cplx> rhs) {
    if (rhs.size() != size()) throw InputError("half-space problem: right-hand side does not match the box");
    for (const cplx& v : rhs) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InputError("half-space problem: non-finite rhs");
    }
    rhs_ = std::move(rhs);
  }

  std::size_t lateral_count() const noexcept {
    std::size_t c = 1;
    for (int ax = 0; ax < dimension() - 1; ++ax) c *= static_cast<std::size_t>(lateral_nodes());
    return c;
  }
  std::size_t size() const noexcept { return lateral_count() * static_cast<std::size_t>(depth_); }

  /// Array shape: (2L, ..., 2L, D).
  std::vector<int> shape() const {
    std::vector<int> s(static_cast<std::size_t>(dimension() - 1), lateral_nodes());
    s.push_back(depth_);
    return s;
  }

  /// Lattice coordinates (lateral in [-L, L-1], depth in [1, D]) of a flat index.
  std::vector<int> node(std::size_t flat) const {
    std::vector<int> y(static_cast<std::size_t>(dimension()));
    y.back() = static_cast<int>(flat % static_cast<std::size_t>(depth_)) + 1;
    flat /= static_cast<std::size_t>(depth_);
    for (int ax = dimension() - 2; ax >= 0; --ax) {
      y[static_cast<std::size_t>(ax)] = static_cast<int>(flat % static_cast<std::size_t>(lateral_nodes())) - half_;
      flat /= static_cast<std::size_t>(lateral_nodes());
    }
    return y;
  }

  std::size_t flat_index(std::span<const int> y) const {
    std::size_t f = 0;
    for (int ax = 0; ax < dimension() - 1; ++ax) {
      f = f * static_cast<std::size_t>(lateral_nodes()) + static_cast<std::size_t>(y[static_cast<std::size_t>(ax)] + half_);
    }
    return f * static_cast<std::size_t>(depth_) + static_cast<std::size_t>(y.back() - 1);
  }

  /// h^m K(h d) for a lateral offset already wrapped into [-L, L-1]. An offset
  /// of exactly -L sits on the wrap seam and is averaged with +L, keeping odd
  /// kernels odd on the torus.
  cplx box_kernel(std::span<const int> offset) const {
    const int m = dimension();
    std::vector<double> x(static_cast<std::size_t>(m));
    std::vector<int> seam;
    for (int ax = 0; ax < m; ++ax) {
      x[static_cast<std::size_t>(ax)] = h_ * offset[static_cast<std::size_t>(ax)];
      if (ax < m - 1 && offset[static_cast<std::size_t>(ax)] == -half_) seam.push_back(ax);
    }
    double hm = 1.0;
    for (int ax = 0; ax < m; ++ax) hm *= h_;
    if (seam.empty()) return kernel_(x) * hm;
    cplx sum = 0.0;
    const std::size_t combos = std::size_t{1} << seam.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      for (std::size_t s = 0; s < seam.size(); ++s) {
        x[static_cast<std::size_t>(seam[s])] = ((mask >> s) & 1 ? 1.0 : -1.0) * h_ * half_;
      }
      sum += kernel_(x);
    }
    return sum * hm / static_cast<double>(combos);
  }

  /// Lateral frequency of FFT slot p along one axis.
  double lateral_frequency(int slot) const {
    const int q = slot < half_ ? slot : slot - 2 * half_;
    return 2 * std::numbers::pi * q / (2 * half_ * h_);
  }

 private:
  Kernel kernel_;
  double h_;
  cplx a_;
  int half_;
  int depth_;
  std::vector<cplx> rhs_;
};

/// Matrix-free application of the box operator: periodic convolution in the
/// lateral axes and zero-padded (length 2D) linear convolution in depth, both
/// through one FFT of the padded grid.
class HalfSpaceOperator {
 public:
  explicit HalfSpaceOperator(const HalfSpaceProblem& p) : a_(p.a()), depth_(p.depth()), lateral_(p.lateral_count()) {
    const int m = p.dimension();
    dims_.assign(static_cast<std::size_t>(m - 1), p.lateral_nodes());
    dims_.push_back(2 * depth_);
    kernel_hat_.assign(lateral_ * static_cast<std::size_t>(2 * depth_), 0.0);
    if (!p.kernel().is_zero()) {
      std::vector<int> offset(static_cast<std::size_t>(m));
      for (std::size_t lat = 0; lat < lateral_; ++lat) {
        std::size_t rest = lat;
        for (int ax = m - 2; ax >= 0; --ax) {
          const int slot = static_cast<int>(rest % static_cast<std::size_t>(p.lateral_nodes()));
          rest /= static_cast<std::size_t>(p.lateral_nodes());
          offset[static_cast<std::size_t>(ax)] = slot < p.lateral_half() ? slot : slot - p.lateral_nodes();
        }
        for (int s = 0; s < 2 * depth_; ++s) {
          if (s == depth_) continue;  // offset -D never couples two box nodes
          offset.back() = s < depth_ ? s : s - 2 * depth_;
          kernel_hat_[lat * static_cast<std::size_t>(2 * depth_) + static_cast<std::size_t>(s)] = p.box_kernel(offset);
        }
      }
      fft::transform(kernel_hat_, dims_, fft::Direction::forward);
      const double inv = 1.0 / static_cast<double>(kernel_hat_.size());
      for (cplx& v : kernel_hat_) v *= inv;
      active_ = true;
    }
  }

  std::size_t size() const noexcept { return lateral_ * static_cast<std::size_t>(depth_); }

  std::vector<cplx> operator()(std::span<const cplx> u) const {
    if (u.size() != size()) throw InputError("apply_operator: grid does not match the box");
    std::vector<cplx> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = a_ * u[i];
    if (!active_) return out;
    const auto padded = static_cast<std::size_t>(2 * depth_);
    std::vector<cplx> buf(kernel_hat_.size(), 0.0);
    for (std::size_t lat = 0; lat < lateral_; ++lat) {
      std::copy_n(u.begin() + static_cast<std::ptrdiff_t>(lat * static_cast<std::size_t>(depth_)), depth_,
                  buf.begin() + static_cast<std::ptrdiff_t>(lat * padded));
    }
    fft::transform(buf, dims_, fft::Direction::forward);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= kernel_hat_[i];
    fft::transform(buf, dims_, fft::Direction::backward);
    for (std::size_t lat = 0; lat < lateral_; ++lat) {
      for (int j = 0; j < depth_; ++j) {
        out[lat * static_cast<std::size_t>(depth_) + static_cast<std::size_t>(j)] += buf[lat * padded + static_cast<std::size_t>(j)];
      }
    }
    return out;
  }

 private:
  cplx a_;
  int depth_;
  std::size_t lateral_;
  std::vector<int> dims_;
  std::vector<cplx> kernel_hat_;
  bool active_ = false;
};

inline std::vector<cplx> apply_operator(const HalfSpaceProblem& p, std::span<const cplx> u) {
  return HalfSpaceOperator(p)(u);
}

/// max |A u - v|, computed with a freshly built operator.
inline double residual_max(const HalfSpaceProblem& p, std::span<const cplx> u) {
  const std::vector<cplx> au = apply_operator(p, u);
  double worst = 0.0;
  for (std::size_t i = 0; i < au.size(); ++i) worst = std::max(worst, std::abs(au[i] - p.rhs()[i]));
  return worst;
}

enum class SolveMethod { dense, iterative, wiener_hopf };

inline const char* method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::dense: return "dense";
    case SolveMethod::iterative: return "iterative";
    case SolveMethod::wiener_hopf: return "wiener-hopf";
  }
  return "?";
}

struct SolveReport {
  std::vector<cplx> solution;
  SolveMethod method = SolveMethod::dense;
  double residual_max = 0.0;       // independent apply_operator pass
  double internal_residual = 0.0;  // what the method itself measured, max-norm
  int iterations = 0;              // wiener-hopf: size of the final depth grid
  bool converged = true;
  double tail = 0.0;               // wiener-hopf: largest depth coefficient beyond the box
  double resolution_change = 0.0;  // wiener-hopf: relative change when the depth grid is refined
  double rcond = 0.0;              // dense: reciprocal condition estimate
  std::vector<SliceFailure> slice_failures;
};

inline constexpr std::size_t dense_limit = 5000;

/// Direct LU solve of the matrix assembled column by column from the operator.
inline SolveReport solve_dense(const HalfSpaceProblem& p) {
  const std::size_t n = p.size();
  if (n > dense_limit) throw InputError("solve_dense: more than 5000 unknowns");
  const HalfSpaceOperator op(p);
  Eigen::MatrixXcd mat(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<cplx> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<cplx> col = op(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(mat);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw SingularSystem(rcond);
  const Eigen::Map<const Eigen::VectorXcd> b(p.rhs().data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXcd x = lu.solve(b);
  SolveReport rep;
  rep.method = SolveMethod::dense;
  rep.solution.assign(x.data(), x.data() + n);
  rep.rcond = rcond;
  rep.internal_residual = (mat * x - b).cwiseAbs().maxCoeff();
  rep.residual_max = residual_max(p, rep.solution);
  return rep;
}

/// Smallest |a + sigma_h| over a coarse grid of the basic cell.
inline double ellipticity_margin(const HalfSpaceProblem& p) {
  const int res = std::max(8, p.lateral_nodes() + p.lateral_nodes() % 2);
  PartialSumPlan plan;
  const int r = std::max({p.lateral_half(), p.depth(), 2});
  plan.radii = {0.5 * r * p.h(), r * p.h()};
  plan.tolerance = 1e300;  // only the values matter here
  const SymbolGrid grid = sample_symbol_grid(p.kernel(), p.a(), p.h(), res, plan);
  double lo = std::abs(grid.values.front());
  for (const cplx& v : grid.values) lo = std::min(lo, std::abs(v));
  return lo;
}

/// Matrix-free restarted GMRES on the box system, after an ellipticity
/// pre-flight on the sampled symbol.
inline SolveReport solve_truncated(const HalfSpaceProblem& p, double tol, int max_iterations = 2000) {
  if (!(tol > 0.0)) throw InputError("solve_truncated: tolerance must be positive");
  const double margin = ellipticity_margin(p);
  if (margin < 1e-8 * std::max(1.0, std::abs(p.a()))) {
    throw EllipticityError("solve_truncated: a + sigma_h vanishes on the sampled grid (min " + std::to_string(margin) + ")");
  }
  const HalfSpaceOperator op(p);
  GmresOptions opt;
  opt.tolerance = tol;
  opt.max_iterations = max_iterations;
  const GmresResult g = gmres(op, p.rhs(), opt);
  SolveReport rep;
  rep.method = SolveMethod::iterative;
  rep.solution = g.x;
  rep.iterations = g.iterations;
  rep.converged = g.converged;
  for (const cplx& r : g.residual) rep.internal_residual = std::max(rep.internal_residual, std::abs(r));
  rep.residual_max = residual_max(p, rep.solution);
  return rep;
}

/// Depth grid size of the Wiener-Hopf slices: a power of two >= max(64, 16 D).
inline std::size_t wiener_hopf_resolution(int depth) {
  std::size_t n = 64;
  while (n < 16 * static_cast<std::size_t>(depth)) n *= 2;
  return n;
}

namespace detail {

struct SliceSymbols {
  std::vector<std::vector<double>> xi_prime;  // one lateral frequency per FFT slot
  std::vector<PeriodicGrid> symbol;           // a + sigma on the depth grid
};

/// Slice symbols a + sum_d K_q(d) e^{-i d t} on a depth grid of n points,
/// with K_q the lateral DFT of the box kernel and |d| <= n/2 - 1.
inline SliceSymbols slice_symbols(const HalfSpaceProblem& p, std::size_t n) {
  const int m = p.dimension();
  const int reach = static_cast<int>(n / 2) - 1;
  const std::size_t lateral = p.lateral_count();
  const std::vector<int> lat_dims(static_cast<std::size_t>(m - 1), p.lateral_nodes());

  // kq[lat * width + d + reach]: lateral DFT of the box kernel at depth offset d
  const std::size_t width = 2 * static_cast<std::size_t>(reach) + 1;
  std::vector<cplx> kq(lateral * width, 0.0);
  if (!p.kernel().is_zero()) {
    std::vector<cplx> slab(lateral);
    std::vector<int> offset(static_cast<std::size_t>(m));
    for (int d = -reach; d <= reach; ++d) {
      for (std::size_t lat = 0; lat < lateral; ++lat) {
        std::size_t rest = lat;
        for (int ax = m - 2; ax >= 0; --ax) {
          const int slot = static_cast<int>(rest % static_cast<std::size_t>(p.lateral_nodes()));
          rest /= static_cast<std::size_t>(p.lateral_nodes());
          offset[static_cast<std::size_t>(ax)] = slot < p.lateral_half() ? slot : slot - p.lateral_nodes();
        }
        offset.back() = d;
        slab[lat] = p.box_kernel(offset);
      }
      if (m > 1) fft::transform(slab, lat_dims, fft::Direction::forward);
      for (std::size_t lat = 0; lat < lateral; ++lat) kq[lat * width + static_cast<std::size_t>(d + reach)] = slab[lat];
    }
  }

  SliceSymbols out;
  for (std::size_t lat = 0; lat < lateral; ++lat) {
    std::vector<double> xi_prime(static_cast<std::size_t>(m - 1));
    std::size_t rest = lat;
    for (int ax = m - 2; ax >= 0; --ax) {
      xi_prime[static_cast<std::size_t>(ax)] =
          p.lateral_frequency(static_cast<int>(rest % static_cast<std::size_t>(p.lateral_nodes())));
      rest /= static_cast<std::size_t>(p.lateral_nodes());
    }
    std::vector<cplx> c(n, 0.0);
    for (int d = -reach; d <= reach; ++d) {
      const cplx v = kq[lat * width + static_cast<std::size_t>(d + reach)];
      if (std::abs(v) >= 1e-12) c[static_cast<std::size_t>((d + static_cast<int>(n)) % static_cast<int>(n))] = v;
    }
    c[0] += p.a();
    out.xi_prime.push_back(std::move(xi_prime));
    out.symbol.push_back(PeriodicGrid::from_coefficients(std::move(c)));
  }
  return out;
}

/// Throws SliceObstruction naming every slice whose symbol vanishes or has
/// nonzero index.
inline void check_slices(const SliceSymbols& s) {
  std::vector<SliceFailure> failures;
  for (std::size_t lat = 0; lat < s.symbol.size(); ++lat) {
    const PeriodicGrid& symbol = s.symbol[lat];
    try {
      const double floor = 1e-10 * std::max(1.0, symbol.max_abs());
      for (const cplx& v : symbol.values()) {
        if (std::abs(v) < floor) throw EllipticityError("slice symbol vanishes");
      }
      const int kappa = compute_index(symbol);
      if (kappa != 0) failures.push_back({s.xi_prime[lat], kappa, "nonzero index of a + sigma_h on the slice"});
    } catch (const Error& e) {
      failures.push_back({s.xi_prime[lat], 0, e.what()});
    }
  }
  if (!failures.empty()) throw SliceObstruction(std::move(failures));
}

struct SliceSweep {
  std::vector<cplx> uhat;  // laterally transformed solution on the box
  double tail = 0.0;
  double riemann_residual = 0.0;
};

/// Laterally transformed solution with depth grid n.
inline SliceSweep sweep_slices(const HalfSpaceProblem& p, std::span<const cplx> vhat, std::size_t n) {
  const SliceSymbols s = slice_symbols(p, n);
  check_slices(s);
  const int depth = p.depth();
  SliceSweep out;
  out.uhat.assign(p.size(), 0.0);
  for (std::size_t lat = 0; lat < s.symbol.size(); ++lat) {
    const PeriodicGrid& symbol = s.symbol[lat];
    std::vector<cplx> g_coef(n, 0.0);
    for (int j = 0; j < depth; ++j) {
      g_coef[static_cast<std::size_t>(j)] = vhat[lat * static_cast<std::size_t>(depth) + static_cast<std::size_t>(j)];
    }
    const PeriodicGrid vgrid = PeriodicGrid::from_coefficients(std::move(g_coef));
    const RiemannProblem rp(symbol.map([](cplx v) { return 1.0 / v; }), vgrid / symbol);
    const RiemannSolution sol = solve_riemann(rp);
    const std::vector<cplx> u = sol.phi_plus.coefficients();
    for (int j = 0; j < depth; ++j) {
      out.uhat[lat * static_cast<std::size_t>(depth) + static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(j)];
    }
    for (std::size_t k = static_cast<std::size_t>(depth); k < n / 2; ++k) out.tail = std::max(out.tail, std::abs(u[k]));
    out.riemann_residual = std::max(out.riemann_residual, sol.residual);
  }
  return out;
}

inline void lateral_transform(std::vector<cplx>& grid, const HalfSpaceProblem& p, fft::Direction dir) {
  if (p.dimension() < 2) return;
  std::vector<int> dims(static_cast<std::size_t>(p.dimension() - 1), p.lateral_nodes());
  dims.push_back(p.depth());
  for (std::size_t ax = 0; ax + 1 < dims.size(); ++ax) fft::transform_axis(grid, dims, ax, dir);
  if (dir == fft::Direction::backward) {
    const double inv = 1.0 / static_cast<double>(p.lateral_count());
    for (cplx& v : grid) v *= inv;
  }
}

}  // namespace detail

/// Index of a + sigma_h on every lateral slice of the problem; throws
/// SliceObstruction when the half-space equation is not uniquely solvable.
inline void solvability_gate(const HalfSpaceProblem& p) {
  detail::check_slices(detail::slice_symbols(p, wiener_hopf_resolution(p.depth())));
}

/// Spectral Wiener-Hopf solve of the half-space equation with infinite depth,
/// reported on the box. A lateral DFT splits the problem into one equation on
/// Z_+ per lateral frequency xi'; each is the periodic Riemann problem
///   Phi+ = (1/G) Phi- + v_hat / G,  G = a + sigma(xi', .),
/// where Phi+ is the transformed solution and Phi- collects the values of the
/// convolution above the boundary. The depth grid is doubled until two
/// successive sweeps agree to tol relative, or max_resolution is reached;
/// converged reports which. The finer sweep is returned.
inline SolveReport solve_wiener_hopf(const HalfSpaceProblem& p, double tol = 1e-8, std::size_t max_resolution = 1u << 16) {
  if (!(tol > 0.0)) throw InputError("solve_wiener_hopf: tolerance must be positive");
  std::vector<cplx> vhat = p.rhs();
  detail::lateral_transform(vhat, p, fft::Direction::forward);
  std::size_t n = wiener_hopf_resolution(p.depth());
  detail::SliceSweep coarse = detail::sweep_slices(p, vhat, n);

  SolveReport rep;
  rep.method = SolveMethod::wiener_hopf;
  for (;;) {
    n *= 2;
    detail::SliceSweep fine = detail::sweep_slices(p, vhat, n);
    double scale = 0.0, change = 0.0;
    for (std::size_t i = 0; i < coarse.uhat.size(); ++i) {
      scale = std::max(scale, std::abs(fine.uhat[i]));
      change = std::max(change, std::abs(coarse.uhat[i] - fine.uhat[i]));
    }
    rep.resolution_change = scale > 0.0 ? change / scale : change;
    coarse = std::move(fine);
    if (rep.resolution_change <= tol || 2 * n > std::max(max_resolution, wiener_hopf_resolution(p.depth()))) break;
  }
  rep.converged = rep.resolution_change <= tol;
  rep.iterations = static_cast<int>(n);  // depth grid of the returned sweep
  rep.tail = coarse.tail;
  rep.internal_residual = coarse.riemann_residual;
  detail::lateral_transform(coarse.uhat, p, fft::Direction::backward);
  rep.solution = std::move(coarse.uhat);
  rep.residual_max = residual_max(p, rep.solution);
  return rep;
}

}  // namespace czl

#endif  // CZL_SOLVER_HPP
