#ifndef CZL_FORMAT_HPP
#define CZL_FORMAT_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace czl {

/// Fixed 17-significant-digit rendering used by every CSV writer, so that
/// identical inputs give byte-identical files.
inline std::string fmt17(double v) {
  if (v == 0.0) v = 0.0;  // fold -0 into 0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// "re+imi" with both parts at 17 significant digits.
inline std::string format_complex(std::complex<double> v) {
  return fmt17(v.real()) + (std::signbit(v.imag()) ? "-" : "+") + fmt17(std::abs(v.imag())) + "i";
}

}  // namespace czl

#endif  // CZL_FORMAT_HPP
