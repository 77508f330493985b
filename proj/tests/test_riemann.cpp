#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "czl/io.hpp"
#include "czl/riemann.hpp"
#include "oracles.hpp"

using czl::cplx;
using czl::PeriodicGrid;

namespace {

const cplx I(0.0, 1.0);

PeriodicGrid grid(std::size_t n, const std::function<cplx(double)>& f) { return PeriodicGrid(oracle::sample(n, f)); }

PeriodicGrid random_poly(std::mt19937& rng, std::size_t n, int degree) {
  std::normal_distribution<double> d;
  std::vector<std::pair<int, cplx>> terms;
  for (int k = -degree; k <= degree; ++k) terms.emplace_back(k, cplx(d(rng), d(rng)));
  return grid(n, oracle::trig(terms));
}

/// exp of a random smooth function: always index 0.
PeriodicGrid random_index_zero(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<std::pair<int, cplx>> terms;
  for (int k = -4; k <= 4; ++k) terms.emplace_back(k, 0.3 * cplx(d(rng), d(rng)) / (1.0 + std::abs(k)));
  const auto f = oracle::trig(terms);
  return grid(n, [f](double t) { return std::exp(f(t)); });
}

}  // namespace

TEST(Projection, Examples) {
  const std::size_t n = 64;
  const PeriodicGrid one = PeriodicGrid::constant(n, 1.0);
  const PeriodicGrid delta1 = grid(n, [](double t) { return std::exp(-I * t); });
  const PeriodicGrid delta_m1 = grid(n, [](double t) { return std::exp(I * t); });
  for (auto proj : {&czl::project_plus_coeff, &czl::project_plus_cot}) {
    EXPECT_LT(czl::max_distance(proj(one), one), 1e-13);
    EXPECT_LT(czl::max_distance(proj(delta1), delta1), 1e-13);
    EXPECT_LT(proj(delta_m1).max_abs(), 1e-13);
  }
  EXPECT_LT(czl::max_distance(czl::project_minus(delta_m1), delta_m1), 1e-13);
  EXPECT_LT(czl::project_minus(one).max_abs(), 1e-13);
}

TEST(Projection, ComplementarityAndIdempotence) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodicGrid u = random_poly(rng, 256, 40);
    const PeriodicGrid plus = czl::project_plus_coeff(u);
    const PeriodicGrid minus = czl::project_minus(u);
    EXPECT_LE(czl::max_distance(plus + minus, u), 1e-12);
    EXPECT_LE(czl::max_distance(czl::project_plus_coeff(plus), plus), 1e-12);
    EXPECT_LE(czl::project_plus_coeff(minus).max_abs(), 1e-12);
    EXPECT_LE(czl::max_distance(czl::project_minus(minus), minus), 1e-12);
  }
}

TEST(Projection, CotangentRouteAgreesWithTruncation) {
  std::mt19937 rng(2);
  for (std::size_t n : {64u, 256u, 1024u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const PeriodicGrid u = random_poly(rng, n, static_cast<int>(n / 4));
      EXPECT_LE(czl::max_distance(czl::project_plus_cot(u), czl::project_plus_coeff(u)), 1e-10) << n;
    }
  }
}

TEST(Projection, CoefficientRoundTrip) {
  std::mt19937 rng(8);
  const PeriodicGrid u = random_poly(rng, 128, 30);
  EXPECT_LE(czl::max_distance(PeriodicGrid::from_coefficients(u.coefficients()), u), 1e-13);
  // mode k of e^{-ikt} sits at coefficient slot k
  const auto c = grid(128, [](double t) { return std::exp(-3.0 * I * t); }).coefficients();
  EXPECT_NEAR(std::abs(c[3] - 1.0), 0.0, 1e-13);
}

TEST(PeriodicGridTest, Validation) {
  EXPECT_THROW(PeriodicGrid(std::vector<cplx>(12, 1.0)), czl::InputError);
  EXPECT_THROW(PeriodicGrid(std::vector<cplx>(4, 1.0)), czl::InputError);
  std::vector<cplx> bad(16, 1.0);
  bad[3] = std::nan("");
  EXPECT_THROW(PeriodicGrid(std::move(bad)), czl::InputError);
}

TEST(Index, Examples) {
  const std::size_t n = 4096;
  EXPECT_EQ(czl::compute_index(PeriodicGrid::constant(n, 1.0)), 0);
  EXPECT_EQ(czl::compute_index(grid(n, [](double t) { return std::exp(I * t); })), 1);
  EXPECT_EQ(czl::compute_index(grid(n, [](double t) { return std::exp(2.0 * I * t); })), 2);
  EXPECT_EQ(czl::compute_index(grid(n, [](double t) { return std::exp(-3.0 * I * t); })), -3);
  EXPECT_EQ(czl::compute_index(grid(n, [](double t) { return (2.0 + std::exp(I * t)) / (2.0 + std::exp(-I * t)); })), 0);
}

TEST(Index, AgreesWithDenseUnwrapOracle) {
  std::mt19937 rng(4);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 10; ++trial) {
    const cplx c0(d(rng), d(rng));
    const cplx c1(d(rng), d(rng));
    const cplx c2(d(rng), d(rng));
    auto f = [=](double t) { return c0 + c1 * std::exp(I * t) + c2 * std::exp(-2.0 * I * t); };
    const auto dense = oracle::sample(40960, f);
    double min_mod = 1e300;
    for (const cplx& v : dense) min_mod = std::min(min_mod, std::abs(v));
    if (min_mod < 0.05) continue;
    EXPECT_EQ(czl::compute_index(grid(4096, f)), oracle::winding(dense));
  }
}

TEST(Index, Additivity) {
  const std::size_t n = 1024;
  const PeriodicGrid g1 = grid(n, [](double t) { return 2.0 + std::exp(2.0 * I * t) * 3.0; });
  const PeriodicGrid g2 = grid(n, [](double t) { return std::exp(-I * t) * (1.5 + std::cos(t)); });
  EXPECT_EQ(czl::compute_index(g1 * g2), czl::compute_index(g1) + czl::compute_index(g2));
}

TEST(Index, UnresolvedAndVanishing) {
  EXPECT_THROW(czl::compute_index(grid(64, [](double t) { return std::exp(20.0 * I * t); })), czl::WindingError);
  EXPECT_THROW(czl::compute_index(grid(64, [](double t) { return cplx(std::sin(t), 0.0); })), czl::Error);
}

TEST(Factorize, Identity) {
  const auto f = czl::factorize(PeriodicGrid::constant(64, 1.0));
  EXPECT_LT(czl::max_distance(f.x_plus, PeriodicGrid::constant(64, 1.0)), 1e-14);
  EXPECT_LT(czl::max_distance(f.x_minus, PeriodicGrid::constant(64, 1.0)), 1e-14);
}

TEST(Factorize, PlusOnlyCoefficient) {
  const PeriodicGrid g = grid(256, [](double t) { return 2.0 + std::exp(-I * t); });
  const auto f = czl::factorize(g);
  EXPECT_LT(czl::max_distance(f.x_plus, g), 1e-12);
  EXPECT_LT(czl::max_distance(f.x_minus, PeriodicGrid::constant(256, 1.0)), 1e-12);
}

TEST(Factorize, RandomRoundTripProperty) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodicGrid g = random_index_zero(rng, 512);
    const auto f = czl::factorize(g);
    double rel = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) rel = std::max(rel, std::abs(f.x_plus[j] * f.x_minus[j] - g[j]) / std::abs(g[j]));
    EXPECT_LE(rel, 1e-9);
    EXPECT_LT(czl::analyticity_defect(f.x_plus, true), 1e-9);
    EXPECT_LT(czl::analyticity_defect(f.x_minus, false), 1e-9);
  }
}

TEST(Factorize, NonzeroIndexRefused) {
  try {
    czl::factorize(grid(64, [](double t) { return std::exp(-2.0 * I * t); }));
    FAIL() << "expected IndexObstruction";
  } catch (const czl::IndexObstruction& e) {
    EXPECT_EQ(e.kappa(), -2);
    EXPECT_EQ(e.kernel_dimension(), 2);
    EXPECT_EQ(e.cokernel_dimension(), 0);
  }
}

TEST(Riemann, UnitCoefficientSplitsTheData) {
  // Phi+ - Phi- = g
  std::mt19937 rng(3);
  const PeriodicGrid g = random_poly(rng, 128, 20);
  const auto s = czl::solve_riemann(czl::RiemannProblem(PeriodicGrid::constant(128, 1.0), g));
  EXPECT_LT(czl::max_distance(s.phi_plus, czl::project_plus_coeff(g)), 1e-12);
  EXPECT_LT(czl::max_distance(s.phi_minus, czl::project_minus(g).map([](cplx v) { return -v; })), 1e-12);
}

TEST(Riemann, ManufacturedSolution) {
  const std::size_t n = 512;
  const PeriodicGrid G = grid(n, [](double t) { return (2.0 + std::exp(I * t)) / (2.0 + std::exp(-I * t)); });
  const PeriodicGrid phi_p = grid(n, [](double t) { return 2.0 + std::exp(-I * t); });
  const PeriodicGrid phi_m = grid(n, [](double t) { return std::exp(I * t); });
  const auto s = czl::solve_riemann(czl::RiemannProblem(G, phi_p - G * phi_m));
  EXPECT_LT(czl::max_distance(s.phi_plus, phi_p), 1e-8);
  EXPECT_LT(czl::max_distance(s.phi_minus, phi_m), 1e-8);
  EXPECT_LT(s.residual, 1e-8);
}

TEST(Riemann, RandomManufacturedProperty) {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodicGrid G = random_index_zero(rng, 512);
    const PeriodicGrid u = random_poly(rng, 512, 12);
    const PeriodicGrid phi_p = czl::project_plus_coeff(u);
    const PeriodicGrid phi_m = czl::project_minus(u);
    const auto s = czl::solve_riemann(czl::RiemannProblem(G, phi_p - G * phi_m));
    EXPECT_LT(czl::max_distance(s.phi_plus, phi_p), 1e-8);
    EXPECT_LT(czl::max_distance(s.phi_minus, phi_m), 1e-8);
  }
}

TEST(Riemann, LoopCoefficientIsObstructed) {
  const PeriodicGrid G = grid(64, [](double t) { return std::exp(I * t); });
  const czl::RiemannProblem p(G, PeriodicGrid::constant(64, 1.0));
  EXPECT_EQ(p.kappa(), 1);
  try {
    czl::solve_riemann(p);
    FAIL() << "expected IndexObstruction";
  } catch (const czl::IndexObstruction& e) {
    EXPECT_EQ(e.kappa(), 1);
    EXPECT_EQ(e.cokernel_dimension(), 1);
    EXPECT_NE(std::string(e.what()).find("index"), std::string::npos);
  }
}

TEST(Riemann, GridCsvRoundTrip) {
  std::mt19937 rng(6);
  const PeriodicGrid u = random_poly(rng, 64, 10);
  std::stringstream ss;
  czl::io::write_periodic_grid(ss, u);
  EXPECT_EQ(czl::max_distance(czl::io::read_periodic_grid(ss), u), 0.0);
}
