#ifndef CZL_FFT_HPP
#define CZL_FFT_HPP

// Thin RAII layer over FFTW. Plans are created with FFTW_ESTIMATE on every
// call, so nothing is cached between calls. The FFTW planner is not
// thread-safe; callers that fan out must serialize planning.

#include <fftw3.h>

#include <complex>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "czl/error.hpp"

namespace czl {

using cplx = std::complex<double>;

namespace fft {

enum class Direction : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {
struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;
}  // namespace detail

/// In-place unnormalized multidimensional DFT, row-major with the last axis
/// fastest. forward computes sum_x f(x) exp(-2 pi i k.x / n).
inline void transform(std::span<cplx> data, std::span<const int> dims, Direction dir) {
  if (dims.empty()) throw InputError("fft: empty shape");
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                      [](std::size_t acc, int d) { return acc * static_cast<std::size_t>(d); });
  if (total != data.size()) throw InputError("fft: shape does not match buffer size");
  if (total == 0) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  detail::Plan plan(fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                                  static_cast<int>(dir), FFTW_ESTIMATE));
  if (!plan) throw Error("fft: FFTW planning failed");
  fftw_execute(plan.get());
}

inline void transform(std::span<cplx> data, Direction dir) {
  const int n = static_cast<int>(data.size());
  transform(data, std::span<const int>(&n, 1), dir);
}

/// Strided batch of 1D transforms along one axis of a row-major array.
inline void transform_axis(std::span<cplx> data, std::span<const int> dims, std::size_t axis,
                           Direction dir) {
  std::size_t inner = 1;
  for (std::size_t k = axis + 1; k < dims.size(); ++k) inner *= static_cast<std::size_t>(dims[k]);
  std::size_t outer = 1;
  for (std::size_t k = 0; k < axis; ++k) outer *= static_cast<std::size_t>(dims[k]);
  const int n = dims[axis];
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_iodim transform_dim{n, static_cast<int>(inner), static_cast<int>(inner)};
  fftw_iodim loops[2] = {{static_cast<int>(outer), n * static_cast<int>(inner),
                          n * static_cast<int>(inner)},
                         {static_cast<int>(inner), 1, 1}};
  detail::Plan plan(
      fftw_plan_guru_dft(1, &transform_dim, 2, loops, buf, buf, static_cast<int>(dir), FFTW_ESTIMATE));
  if (!plan) throw Error("fft: FFTW planning failed");
  fftw_execute(plan.get());
}

}  // namespace fft
}  // namespace czl

#endif  // CZL_FFT_HPP
