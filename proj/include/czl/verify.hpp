#ifndef CZL_VERIFY_HPP
#define CZL_VERIFY_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "czl/error.hpp"
#include "czl/format.hpp"
#include "czl/kernel.hpp"
#include "czl/riemann.hpp"
#include "czl/solvability.hpp"
#include "czl/symbol.hpp"

namespace czl {

struct VerifyRow {
  std::string name;
  bool passed = false;
  std::string detail;
  bool asserted = true;  // informational rows never fail the suite
};

namespace detail {

inline PeriodicGrid random_trig_poly(std::mt19937_64& rng, std::size_t n, int degree) {
  std::normal_distribution<double> d;
  std::vector<cplx> c(n, 0.0);
  for (int k = -degree; k <= degree; ++k) {
    const double re = d(rng);
    c[static_cast<std::size_t>((k + static_cast<int>(n)) % static_cast<int>(n))] = {re, d(rng)};
  }
  return PeriodicGrid::from_coefficients(std::move(c));
}

inline VerifyRow guarded(const std::string& name, const std::function<VerifyRow()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {name, false, std::string("error: ") + e.what()};
  }
}

}  // namespace detail

/// Fixed corpus of exact identities and convergence checks.
inline std::vector<VerifyRow> run_verification() {
  std::vector<VerifyRow> rows;
  const Kernel r21 = Kernel::riesz(2, 1);
  const Kernel inv_x = kernels::one_over_x();

  rows.push_back(detail::guarded("scaling identity", [&] {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    const PartialSumPlan plan{{4.0, 8.0}};
    for (double h : {1.0, 0.5, 0.25}) {
      std::uniform_real_distribution<double> u(-std::numbers::pi / h, std::numbers::pi / h);
      for (int s = 0; s < 10; ++s) {
        const std::vector<double> xi{u(rng), u(rng)};
        const std::vector<double> hx{h * xi[0], h * xi[1]};
        const cplx lhs = discrete_symbol(r21, 0.0, h, xi, plan).value;
        const cplx rhs = discrete_symbol(r21, 0.0, 1.0, hx, plan.scaled(1.0 / h)).value;
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    const cplx a = discrete_symbol(inv_x, 0.0, 0.5, std::vector<double>{std::numbers::pi}, PartialSumPlan{{500.0, 1000.0}}).value;
    const cplx b = discrete_symbol(inv_x, 0.0, 1.0, std::vector<double>{std::numbers::pi / 2}, PartialSumPlan{{1000.0, 2000.0}}).value;
    worst = std::max(worst, std::abs(a - b));
    return VerifyRow{"scaling identity", worst <= 1e-12, "max |sigma_h(xi) - sigma_1(h xi)| = " + fmt17(worst)};
  }));

  rows.push_back(detail::guarded("monotone convergence", [&] {
    const std::vector<double> hs{1.0, 0.5, 0.25, 0.125};
    bool ok = true;
    std::string detail;
    for (const auto& xi : std::vector<std::vector<double>>{{1.0, 1.0}, {2.0, 0.5}, {0.3, 1.7}}) {
      const Lemma1Report rep = lemma1_convergence_report(r21, xi, hs);
      ok = ok && rep.monotone;
      detail += "(" + fmt17(xi[0]) + "," + fmt17(xi[1]) + "):";
      for (const Lemma1Row& r : rep.rows) detail += " " + fmt17(r.error);
      detail += "; ";
    }
    return VerifyRow{"monotone convergence", ok, detail};
  }));

  rows.push_back(detail::guarded("symbol periodicity", [&] {
    const double h = 0.5;
    // a full-period shift leaves the basic cube; the two faces of the cube
    // are one period apart
    const std::vector<double> lo{-std::numbers::pi / h, 0.4};
    const std::vector<double> hi{std::numbers::pi / h, 0.4};
    const double gap = std::abs(discrete_symbol(r21, 0.0, h, lo, PartialSumPlan{{4.0, 8.0}}).value -
                                discrete_symbol(r21, 0.0, h, hi, PartialSumPlan{{4.0, 8.0}}).value);
    return VerifyRow{"symbol periodicity", gap <= 1e-12,
                     "|sigma_h(-pi/h, .) - sigma_h(pi/h, .)| = " + fmt17(gap)};
  }));

  rows.push_back(detail::guarded("ray constancy", [&] {
    double worst = 0.0;
    for (const Kernel& k : {r21, Kernel::riesz(2, 2), kernels::rotating(), inv_x}) {
      const std::vector<double> xi = k.dimension() == 1 ? std::vector<double>{0.8} : std::vector<double>{0.8, -0.3};
      const cplx s = continuous_symbol(k, 0.0, xi);
      for (double t : {2.0, 5.0, 10.0}) {
        std::vector<double> txi = xi;
        for (double& c : txi) c *= t;
        worst = std::max(worst, std::abs(continuous_symbol(k, 0.0, txi) - s));
      }
    }
    return VerifyRow{"ray constancy", worst <= 1e-10, "max |sigma(t xi) - sigma(xi)| = " + fmt17(worst)};
  }));

  rows.push_back(detail::guarded("projection complementarity", [&] {
    std::mt19937_64 rng(11);
    double comp = 0.0, idem = 0.0, cross = 0.0, cot = 0.0;
    for (int s = 0; s < 10; ++s) {
      const PeriodicGrid u = detail::random_trig_poly(rng, 256, 64);
      const PeriodicGrid plus = project_plus_coeff(u);
      const PeriodicGrid minus = project_minus(u);
      comp = std::max(comp, max_distance(plus + minus, u));
      idem = std::max(idem, max_distance(project_plus_coeff(plus), plus));
      cross = std::max(cross, project_plus_coeff(minus).max_abs());
      cot = std::max(cot, max_distance(project_plus_cot(u), plus));
    }
    const bool ok = comp <= 1e-12 && idem <= 1e-12 && cross <= 1e-12 && cot <= 1e-10;
    return VerifyRow{"projection complementarity", ok,
                     "P+ + P- - I " + fmt17(comp) + ", P+P+ - P+ " + fmt17(idem) + ", P+P- " + fmt17(cross) +
                         ", cot vs truncation " + fmt17(cot)};
  }));

  rows.push_back(detail::guarded("index corpus", [&] {
    const std::size_t n = 4096;
    const cplx i(0.0, 1.0);
    const std::vector<std::pair<std::function<cplx(double)>, int>> corpus{
        {[](double) { return cplx(1.0); }, 0},
        {[i](double t) { return std::exp(i * t); }, 1},
        {[i](double t) { return std::exp(2.0 * i * t); }, 2},
        {[i](double t) { return (2.0 + std::exp(i * t)) / (2.0 + std::exp(-i * t)); }, 0},
    };
    bool ok = true;
    std::string got;
    for (const auto& [f, expected] : corpus) {
      const int k = compute_index(PeriodicGrid::sample(n, f));
      ok = ok && k == expected;
      got += std::to_string(k) + " ";
    }
    return VerifyRow{"index corpus", ok, "indices " + got + "(expected 0 1 2 0)"};
  }));

  rows.push_back(detail::guarded("discrete vs continuous winding", [&] {
    const std::vector<double> hs{1.0, 0.5, 0.25};
    const std::vector<std::vector<double>> xps{{1.0}, {-1.0}, {2.0}, {-2.0}};
    bool ok = true;
    int cells = 0;
    for (cplx a : {cplx(2.0), cplx(1.0, 1.0)}) {
      const MainTheoremReport rep = main_theorem_report(r21, a, hs, xps, 128);
      ok = ok && rep.agrees;
      cells += static_cast<int>(rep.cells.size());
    }
    return VerifyRow{"discrete vs continuous winding", ok, std::to_string(cells) + " cells, riesz(1) m=2, a in {2, 1+1i}"};
  }));

  rows.push_back(detail::guarded("transmission gate", [&] {
    const TransmissionReport bad = transmission_check(inv_x, 0.0);
    const TransmissionReport good = transmission_check(r21, 1.0);
    const bool ok = !bad.passed && std::abs(bad.defect - 2 * std::numbers::pi) <= 1e-6 && good.passed;
    return VerifyRow{"transmission gate", ok, "1/x defect " + fmt17(bad.defect) + ", riesz(1) defect " + fmt17(good.defect)};
  }));

  rows.push_back(detail::guarded("image of sigma_h vs sigma, m=1", [&] {
    // the continuous symbol of 1/x takes two values, the sawtooth a segment
    const cplx lo = continuous_symbol(inv_x, 0.0, std::vector<double>{-1.0});
    const cplx hi = continuous_symbol(inv_x, 0.0, std::vector<double>{1.0});
    const cplx mid = discrete_symbol(inv_x, 0.0, 1.0, std::vector<double>{std::numbers::pi / 2},
                                     PartialSumPlan{{1000.0, 2000.0}}).value;
    VerifyRow r{"image of sigma_h vs sigma, m=1", true,
                "continuous image {" + format_complex(lo) + ", " + format_complex(hi) + "}, sigma_1(pi/2) = " +
                    format_complex(mid) + " lies strictly between (not asserted)"};
    r.asserted = false;
    return r;
  }));

  return rows;
}

inline bool verification_passed(const std::vector<VerifyRow>& rows) {
  for (const VerifyRow& r : rows) {
    if (r.asserted && !r.passed) return false;
  }
  return true;
}

}  // namespace czl

#endif  // CZL_VERIFY_HPP
