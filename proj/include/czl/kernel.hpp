#ifndef CZL_KERNEL_HPP
#define CZL_KERNEL_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "czl/error.hpp"

namespace czl {

using cplx = std::complex<double>;

enum class KernelFamily { riesz, custom };

/// What a caller asks for; make_kernel validates it.
struct KernelDescription {
  KernelFamily family = KernelFamily::riesz;
  int dimension = 1;
  int riesz_index = 1;        // j in K_j(x) = c_m x_j / |x|^{m+1}
  std::vector<cplx> density;  // m = 1: {Omega(-1), Omega(+1)}; m = 2: samples at 2 pi k / n
  double scale = 1.0;
};

/// Calderon-Zygmund convolution kernel K(x) = scale * Omega(x/|x|) / |x|^m.
///
/// Two families are supported: the Riesz kernels c_m x_j / |x|^{m+1} in any
/// dimension, and tabulated densities on S^0 (m = 1) or S^1 (m = 2). For
/// m = 2 the density is the trigonometric interpolant of equispaced samples.
/// Values are immutable after construction.
class Kernel {
 public:
  static constexpr double mean_tolerance = 1e-10;

  static Kernel riesz(int dimension, int j, double scale = 1.0) {
    if (dimension < 1) throw InputError("kernel: dimension must be >= 1");
    if (j < 1 || j > dimension) {
      throw InputError("kernel: riesz index " + std::to_string(j) + " outside 1.." +
                       std::to_string(dimension));
    }
    check_scale(scale);
    Kernel k;
    k.family_ = KernelFamily::riesz;
    k.dim_ = dimension;
    k.riesz_index_ = j;
    k.scale_ = scale;
    k.cm_ = riesz_constant(dimension);
    return k;
  }

  static Kernel custom(int dimension, std::vector<cplx> density, double scale = 1.0) {
    check_scale(scale);
    if (dimension < 1) throw InputError("kernel: dimension must be >= 1");
    if (dimension > 2) {
      throw InputError("kernel: tabulated densities are supported for m = 1 and m = 2 only");
    }
    for (const cplx& v : density) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw InputError("kernel: density samples must be finite");
      }
    }
    Kernel k;
    k.family_ = KernelFamily::custom;
    k.dim_ = dimension;
    k.scale_ = scale;
    if (dimension == 1) {
      if (density.size() != 2) {
        throw InputError("kernel: m = 1 density needs exactly {Omega(-1), Omega(+1)}");
      }
    } else if (density.size() < 2) {
      throw InputError("kernel: m = 2 density needs at least 2 angle samples");
    }
    k.density_ = std::move(density);
    if (dimension == 2) k.build_modes();
    const cplx mean = k.sphere_integral();
    if (std::abs(mean) > mean_tolerance) {
      throw InputError("kernel: density has nonzero spherical integral " +
                       std::to_string(std::abs(mean)) + " (zero-mean condition violated)");
    }
    return k;
  }

  int dimension() const noexcept { return dim_; }
  KernelFamily family() const noexcept { return family_; }
  int riesz_index() const noexcept { return riesz_index_; }
  double scale() const noexcept { return scale_; }
  const std::vector<cplx>& density() const noexcept { return density_; }

  bool is_zero() const noexcept { return scale_ == 0.0; }

  /// True when some density sample has a nonzero imaginary part.
  bool has_complex_density() const noexcept {
    for (const cplx& v : density_) {
      if (v.imag() != 0.0) return true;
    }
    return false;
  }

  /// c_m = Gamma((m+1)/2) / pi^{(m+1)/2}.
  double riesz_constant() const { return riesz_constant(dim_); }

  static double riesz_constant(int m) {
    const double half = 0.5 * (m + 1);
    return std::tgamma(half) / std::pow(std::numbers::pi, half);
  }

  /// Integral of the density over the unit sphere, without the scale factor.
  /// For the trigonometric interpolant this is 2 pi times the sample mean.
  cplx sphere_integral() const {
    if (family_ == KernelFamily::riesz) return 0.0;
    if (dim_ == 1) return density_[0] + density_[1];
    cplx sum = 0.0;
    for (const cplx& v : density_) sum += v;
    return 2 * std::numbers::pi * sum / static_cast<double>(density_.size());
  }

  /// Omega at a unit vector (density only, no scale).
  cplx density_at(std::span<const double> unit) const {
    if (family_ == KernelFamily::riesz) {
      return riesz_constant() * unit[static_cast<std::size_t>(riesz_index_ - 1)];
    }
    if (dim_ == 1) return unit[0] > 0 ? density_[1] : density_[0];
    return density_at_angle(std::atan2(unit[1], unit[0]));
  }

  /// Trigonometric interpolant of the m = 2 density at angle theta.
  cplx density_at_angle(double theta) const {
    cplx sum = 0.0;
    for (std::size_t p = 0; p < modes_.size(); ++p) {
      const double k = static_cast<double>(mode_number(p));
      sum += modes_[p] * std::polar(1.0, k * theta);
    }
    return sum;
  }

  /// Fourier modes c_k of the m = 2 density, Omega(theta) = sum_k c_k e^{ik theta}.
  /// Entry p holds k = mode_number(p); the Nyquist mode of an even sample count
  /// is split evenly between k = +n/2 and k = -n/2.
  const std::vector<cplx>& density_modes() const noexcept { return modes_; }
  int mode_number(std::size_t p) const noexcept {
    return static_cast<int>(p) - static_cast<int>(modes_.size() / 2);
  }

  /// K(x); exactly 0 at the origin.
  cplx operator()(std::span<const double> x) const {
    double r2 = 0.0;
    for (double c : x) {
      if (!std::isfinite(c)) throw InputError("kernel: non-finite evaluation point");
      r2 += c * c;
    }
    if (r2 == 0.0 || scale_ == 0.0) return 0.0;
    const double r = std::sqrt(r2);
    double rm = 1.0;
    for (int k = 0; k < dim_; ++k) rm *= r;
    if (family_ == KernelFamily::riesz) {
      return scale_ * cm_ *
             x[static_cast<std::size_t>(riesz_index_ - 1)] / (rm * r);
    }
    if (dim_ == 1) return scale_ * (x[0] > 0 ? density_[1] : density_[0]) / rm;
    return scale_ * density_at_angle(std::atan2(x[1], x[0])) / rm;
  }

 private:
  Kernel() = default;

  static void check_scale(double scale) {
    if (!std::isfinite(scale)) throw InputError("kernel: normalization must be finite");
  }

  void build_modes() {
    const std::size_t n = density_.size();
    const bool even = n % 2 == 0;
    // symmetric index range -K..K, with K = n/2 for even n (Nyquist split)
    const std::size_t kmax = n / 2;
    modes_.assign(2 * kmax + 1, 0.0);
    for (std::size_t p = 0; p < modes_.size(); ++p) {
      const int k = static_cast<int>(p) - static_cast<int>(kmax);
      cplx c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double theta = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        c += density_[j] * std::polar(1.0, -k * theta);
      }
      c /= static_cast<double>(n);
      if (even && static_cast<std::size_t>(std::abs(k)) == kmax) c *= 0.5;
      modes_[p] = c;
    }
  }

  KernelFamily family_ = KernelFamily::riesz;
  int dim_ = 1;
  int riesz_index_ = 1;
  double scale_ = 1.0;
  std::vector<cplx> density_;
  std::vector<cplx> modes_;
  double cm_ = 0.0;
};

inline Kernel make_kernel(const KernelDescription& desc) {
  if (desc.family == KernelFamily::riesz) {
    return Kernel::riesz(desc.dimension, desc.riesz_index, desc.scale);
  }
  return Kernel::custom(desc.dimension, desc.density, desc.scale);
}

inline cplx eval_kernel(const Kernel& k, std::span<const double> x) { return k(x); }

// Frequently used fixtures.
namespace kernels {

/// K(x) = 1/x on the line.
inline Kernel one_over_x(double scale = 1.0) { return Kernel::custom(1, {-1.0, 1.0}, scale); }

/// Any kernel with zero normalization.
inline Kernel zero(int dimension) { return Kernel::riesz(dimension, 1, 0.0); }

/// Complex m = 2 kernel Omega(theta) = e^{i theta} / (2 pi), i.e. the Riesz
/// pair R_1 + i R_2. Its symbol turns once around the unit circle on |xi| = 1.
inline Kernel rotating(int samples = 16, double scale = 1.0) {
  std::vector<cplx> omega(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    omega[static_cast<std::size_t>(j)] =
        std::polar(1.0, 2 * std::numbers::pi * j / samples) / (2 * std::numbers::pi);
  }
  return Kernel::custom(2, std::move(omega), scale);
}

}  // namespace kernels
}  // namespace czl

#endif  // CZL_KERNEL_HPP
