#ifndef CZL_SVG_HPP
#define CZL_SVG_HPP

#include <algorithm>
#include <complex>
#include <ostream>
#include <span>
#include <string>

#include "czl/format.hpp"

namespace czl::svg {

/// Complex-plane picture of a closed curve: the polyline of samples, a marker
/// at the first sample and a crosshair at the origin. The number of times the
/// curve goes around the crosshair is the winding number.
inline void write_curve(std::ostream& os, std::span<const std::complex<double>> curve, const std::string& title) {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  for (const auto& z : curve) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double pad = 0.08 * span;
  xmin -= pad;
  ymin -= pad;
  const double extent = span + 2 * pad;
  const double size = 480.0;
  auto px = [&](double x) { return fmt17((x - xmin) / extent * size); };
  auto py = [&](double y) { return fmt17(size - (y - ymin) / extent * size); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"540\" viewBox=\"-20 -40 520 540\">\n";
  os << "<text x=\"0\" y=\"-16\" font-family=\"monospace\" font-size=\"13\">" << title << "</text>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"480\" height=\"480\" fill=\"none\" stroke=\"#bbb\"/>\n";
  os << "<line x1=\"" << px(0) << "\" y1=\"0\" x2=\"" << px(0) << "\" y2=\"480\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  os << "<line x1=\"0\" y1=\"" << py(0) << "\" x2=\"480\" y2=\"" << py(0) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  os << "<circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"4\" fill=\"#c00\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (const auto& z : curve) os << px(z.real()) << ',' << py(z.imag()) << ' ';
  if (!curve.empty()) os << px(curve.front().real()) << ',' << py(curve.front().imag());
  os << "\"/>\n";
  if (!curve.empty()) {
    os << "<circle cx=\"" << px(curve.front().real()) << "\" cy=\"" << py(curve.front().imag())
       << "\" r=\"3.5\" fill=\"#2a2\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace czl::svg

#endif  // CZL_SVG_HPP
