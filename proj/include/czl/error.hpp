#ifndef CZL_ERROR_HPP
#define CZL_ERROR_HPP

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace czl {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments, shapes or configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A winding number could not be resolved: the curve passes too close to the
/// origin or is sampled too coarsely.
class WindingError : public Error {
 public:
  using Error::Error;
};

/// The symbol a + sigma vanishes somewhere on the sampled set.
class EllipticityError : public Error {
 public:
  using Error::Error;
};

/// A periodic Riemann problem with nonzero index.
///
/// In the convention Phi+ = G Phi- + g with Phi+ carrying Fourier modes k >= 0
/// and Phi- carrying k <= -1, a coefficient with index kappa < 0 leaves a
/// |kappa|-dimensional space of homogeneous solutions, and kappa > 0 imposes
/// kappa solvability conditions on g.
class IndexObstruction : public Error {
 public:
  explicit IndexObstruction(int kappa)
      : Error("solvability obstruction: index kappa = " + std::to_string(kappa) +
              " (the solvability conditions are defined by the index; only kappa = 0 is solved)"),
        kappa_(kappa) {}

  int kappa() const noexcept { return kappa_; }
  int kernel_dimension() const noexcept { return kappa_ < 0 ? -kappa_ : 0; }
  int cokernel_dimension() const noexcept { return kappa_ > 0 ? kappa_ : 0; }

 private:
  int kappa_;
};

/// One lateral frequency at which the half-space equation is not uniquely solvable.
struct SliceFailure {
  std::vector<double> xi_prime;
  int kappa = 0;
  std::string reason;
};

/// Raised by the Wiener-Hopf solver when some lateral slice has nonzero index
/// or a vanishing symbol.
class SliceObstruction : public Error {
 public:
  explicit SliceObstruction(std::vector<SliceFailure> failures)
      : Error(describe(failures)), failures_(std::move(failures)) {}

  const std::vector<SliceFailure>& failures() const noexcept { return failures_; }

 private:
  static std::string describe(const std::vector<SliceFailure>& failures) {
    std::string msg = "half-space equation is not uniquely solvable: " +
                      std::to_string(failures.size()) + " slice(s) obstructed";
    if (!failures.empty()) {
      const SliceFailure& f = failures.front();
      msg += " (first: xi' = (";
      for (std::size_t i = 0; i < f.xi_prime.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", f.xi_prime[i]);
        msg += (i ? ", " : "") + std::string(buf);
      }
      msg += "), kappa = " + std::to_string(f.kappa) + ", " + f.reason + ")";
    }
    return msg;
  }

  std::vector<SliceFailure> failures_;
};

/// Dense solve hit a numerically singular matrix.
class SingularSystem : public Error {
 public:
  explicit SingularSystem(double rcond)
      : Error("numerically singular system (reciprocal condition estimate " +
              std::to_string(rcond) + ")"),
        rcond_(rcond) {}

  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

}  // namespace czl

#endif  // CZL_ERROR_HPP
