#include <gtest/gtest.h>

#include <random>

#include "czl/io.hpp"
#include "czl/kernel.hpp"
#include "oracles.hpp"

using czl::cplx;
using czl::Kernel;

namespace {

std::vector<cplx> planar_density(const std::function<cplx(double)>& f, int n) {
  std::vector<cplx> v(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = f(2 * oracle::pi * j / n);
  return v;
}

}  // namespace

TEST(Kernel, RieszConstantMatchesGammaRecursion) {
  for (int m = 1; m <= 5; ++m) {
    EXPECT_NEAR(Kernel::riesz_constant(m), oracle::riesz_constant(m), 1e-15) << "m=" << m;
  }
  EXPECT_NEAR(Kernel::riesz_constant(2), 1.0 / (2 * oracle::pi), 1e-16);
}

TEST(Kernel, RieszValueOnAxis) {
  const std::vector<double> x{1.0, 0.0};
  EXPECT_NEAR(std::abs(czl::eval_kernel(Kernel::riesz(2, 1), x) - 0.15915494309189535), 0.0, 1e-15);
}

TEST(Kernel, ZeroAtOrigin) {
  const std::vector<Kernel> ks{Kernel::riesz(1, 1), Kernel::riesz(2, 2), Kernel::riesz(3, 1),
                               czl::kernels::one_over_x(), czl::kernels::rotating()};
  for (const Kernel& k : ks) {
    const std::vector<double> origin(static_cast<std::size_t>(k.dimension()), 0.0);
    EXPECT_EQ(k(origin), cplx(0.0));
  }
}

TEST(Kernel, HomogeneityProperty) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<Kernel> ks{Kernel::riesz(1, 1), Kernel::riesz(2, 1), Kernel::riesz(2, 2), Kernel::riesz(3, 3),
                               czl::kernels::one_over_x(), czl::kernels::rotating()};
  for (const Kernel& k : ks) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(k.dimension()));
      for (double& c : x) c = u(rng);
      const cplx base = k(x);
      for (double t : {2.0, 3.0, 10.0}) {
        std::vector<double> tx = x;
        for (double& c : tx) c *= t;
        EXPECT_LE(std::abs(k(tx) - std::pow(t, -k.dimension()) * base), 1e-12 * std::abs(base));
      }
    }
  }
}

TEST(Kernel, HomogeneityOfDegreeMinusTwo) {
  const Kernel k = Kernel::riesz(2, 1);
  const std::vector<double> x{1.0, 1.0}, x2{2.0, 2.0};
  EXPECT_NEAR(std::abs(k(x2) - 0.25 * k(x)), 0.0, 1e-16);
}

TEST(Kernel, ZeroMeanBySphereQuadrature) {
  // midpoint rule on the circle with n and 2n nodes
  for (const Kernel& k : {Kernel::riesz(2, 1), Kernel::riesz(2, 2), czl::kernels::rotating()}) {
    for (int n : {64, 128}) {
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) {
        const double th = 2 * oracle::pi * (j + 0.5) / n;
        const std::vector<double> w{std::cos(th), std::sin(th)};
        s += k(w) * (2 * oracle::pi / n);
      }
      EXPECT_LT(std::abs(s), 1e-10);
    }
  }
}

TEST(Kernel, ConstantDensityRejected) {
  EXPECT_THROW(Kernel::custom(2, std::vector<cplx>(8, 1.0)), czl::InputError);
}

TEST(Kernel, AntisymmetricPairAccepted) {
  const Kernel k = Kernel::custom(1, {-1.0, 1.0});
  EXPECT_EQ(k(std::vector<double>{2.0}), cplx(0.5));
  EXPECT_EQ(k(std::vector<double>{-4.0}), cplx(-0.25));
}

TEST(Kernel, InvalidDescriptions) {
  EXPECT_THROW(Kernel::riesz(2, 3), czl::InputError);
  EXPECT_THROW(Kernel::riesz(2, 0), czl::InputError);
  EXPECT_THROW(Kernel::riesz(0, 1), czl::InputError);
  EXPECT_THROW(Kernel::custom(1, {1.0, std::nan("")}), czl::InputError);
  EXPECT_THROW(Kernel::custom(1, {1.0, 2.0, 3.0}), czl::InputError);
  EXPECT_THROW(Kernel::custom(3, {1.0, -1.0}), czl::InputError);
}

TEST(Kernel, TrigInterpolationIsExactOnBandLimitedDensity) {
  auto omega = [](double t) { return cplx(std::cos(t) + 0.5 * std::sin(2 * t), 0.3 * std::cos(3 * t)); };
  const Kernel k = Kernel::custom(2, planar_density(omega, 16));
  for (double t : {0.1, 1.234, 2.9, 4.0, 6.1}) {
    EXPECT_NEAR(std::abs(k.density_at_angle(t) - omega(t)), 0.0, 1e-13) << t;
  }
  EXPECT_TRUE(k.has_complex_density());
  EXPECT_FALSE(Kernel::riesz(2, 1).has_complex_density());
}

TEST(Kernel, NyquistModeSplitKeepsSamples) {
  // an alternating density is the Nyquist mode; interpolation must still hit the samples
  std::vector<cplx> d(8);
  for (int j = 0; j < 8; ++j) d[static_cast<std::size_t>(j)] = j % 2 ? -1.0 : 1.0;
  const Kernel k = Kernel::custom(2, d);
  for (int j = 0; j < 8; ++j) {
    EXPECT_NEAR(std::abs(k.density_at_angle(2 * oracle::pi * j / 8) - d[static_cast<std::size_t>(j)]), 0.0, 1e-13);
  }
  EXPECT_NEAR(k.density_at_angle(2 * oracle::pi / 16).imag(), 0.0, 1e-13);
}

TEST(Kernel, ZeroKernel) {
  const Kernel z = czl::kernels::zero(2);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z(std::vector<double>{0.3, 0.4}), cplx(0.0));
}

TEST(Kernel, MakeKernelFromDescription) {
  czl::KernelDescription d;
  d.family = czl::KernelFamily::custom;
  d.dimension = 1;
  d.density = {-1.0, 1.0};
  d.scale = 2.0;
  EXPECT_EQ(czl::make_kernel(d)(std::vector<double>{1.0}), cplx(2.0));
}
