#ifndef CZL_GMRES_HPP
#define CZL_GMRES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "czl/error.hpp"

namespace czl {

using cplx = std::complex<double>;

struct GmresOptions {
  double tolerance = 1e-10;  // on ||b - A x||_2 / ||b||_2
  int restart = 60;
  int max_iterations = 2000;
};

struct GmresResult {
  std::vector<cplx> x;
  std::vector<cplx> residual;  // b - A x, recomputed explicitly at exit
  int iterations = 0;          // Arnoldi steps over all cycles
  double relative_residual = 0.0;
  bool converged = false;
};

namespace detail {
inline double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}
inline cplx dot(std::span<const cplx> u, std::span<const cplx> v) {  // conj(u) . v
  cplx s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}
}  // namespace detail

/// Restarted GMRES with modified Gram-Schmidt and complex Givens rotations.
/// apply(x) must return A x as a std::vector<cplx>.
template <class Apply>
GmresResult gmres(Apply&& apply, std::span<const cplx> b, const GmresOptions& opt = {}) {
  const std::size_t n = b.size();
  if (opt.restart < 1 || opt.max_iterations < 0 || !(opt.tolerance > 0.0)) {
    throw InputError("gmres: invalid options");
  }
  GmresResult res;
  res.x.assign(n, 0.0);
  const double bnorm = detail::norm2(b);
  auto explicit_residual = [&] {
    std::vector<cplx> ax = apply(res.x);
    std::vector<cplx> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
    return r;
  };
  if (bnorm == 0.0) {
    res.residual.assign(n, 0.0);
    res.converged = true;
    return res;
  }
  const int mdim = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(opt.restart), n));
  std::vector<cplx> r = explicit_residual();
  double beta = detail::norm2(r);

  while (beta / bnorm > opt.tolerance && res.iterations < opt.max_iterations) {
    std::vector<std::vector<cplx>> basis;
    basis.reserve(static_cast<std::size_t>(mdim) + 1);
    basis.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
    // hess[j] holds column j of the (mdim+1) x mdim Hessenberg matrix
    std::vector<std::vector<cplx>> hess;
    std::vector<double> cs;
    std::vector<cplx> sn;
    std::vector<cplx> rhs(static_cast<std::size_t>(mdim) + 1, 0.0);
    rhs[0] = beta;
    int used = 0;
    for (int j = 0; j < mdim && res.iterations < opt.max_iterations; ++j) {
      std::vector<cplx> w = apply(basis[static_cast<std::size_t>(j)]);
      std::vector<cplx> col(static_cast<std::size_t>(j) + 2, 0.0);
      for (int i = 0; i <= j; ++i) {
        const cplx hij = detail::dot(basis[static_cast<std::size_t>(i)], w);
        col[static_cast<std::size_t>(i)] = hij;
        for (std::size_t q = 0; q < n; ++q) w[q] -= hij * basis[static_cast<std::size_t>(i)][q];
      }
      const double wnorm = detail::norm2(w);
      col[static_cast<std::size_t>(j) + 1] = wnorm;
      for (int i = 0; i < j; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const cplx t = cs[iu] * col[iu] + sn[iu] * col[iu + 1];
        col[iu + 1] = -std::conj(sn[iu]) * col[iu] + cs[iu] * col[iu + 1];
        col[iu] = t;
      }
      const auto ju = static_cast<std::size_t>(j);
      const cplx h1 = col[ju];
      const double h2 = std::abs(col[ju + 1]);
      const double rho = std::hypot(std::abs(h1), h2);
      double c = 0.0;
      cplx s = 1.0;
      if (std::abs(h1) > 0.0) {
        c = std::abs(h1) / rho;
        s = (h1 / std::abs(h1)) * h2 / rho;
        col[ju] = (h1 / std::abs(h1)) * rho;
      } else {
        col[ju] = h2;
      }
      col[ju + 1] = 0.0;
      cs.push_back(c);
      sn.push_back(s);
      rhs[ju + 1] = -std::conj(s) * rhs[ju];
      rhs[ju] = c * rhs[ju];
      hess.push_back(std::move(col));
      ++res.iterations;
      used = j + 1;
      const bool breakdown = wnorm <= 1e-14 * beta;
      if (std::abs(rhs[ju + 1]) / bnorm <= opt.tolerance || breakdown) break;
      basis.emplace_back(n);
      for (std::size_t q = 0; q < n; ++q) basis.back()[q] = w[q] / wnorm;
    }
    // back substitution on the triangularized Hessenberg system
    std::vector<cplx> y(static_cast<std::size_t>(used), 0.0);
    for (int i = used - 1; i >= 0; --i) {
      const auto iu = static_cast<std::size_t>(i);
      cplx s = rhs[iu];
      for (int q = i + 1; q < used; ++q) s -= hess[static_cast<std::size_t>(q)][iu] * y[static_cast<std::size_t>(q)];
      y[iu] = s / hess[iu][iu];
    }
    for (int i = 0; i < used; ++i) {
      for (std::size_t q = 0; q < n; ++q) res.x[q] += y[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(i)][q];
    }
    r = explicit_residual();
    const double next = detail::norm2(r);
    if (!(next < beta) && used < mdim) {
      beta = next;
      break;  // stagnation after a breakdown
    }
    beta = next;
  }
  res.residual = std::move(r);
  res.relative_residual = beta / bnorm;
  res.converged = res.relative_residual <= opt.tolerance;
  return res;
}

}  // namespace czl

#endif  // CZL_GMRES_HPP
