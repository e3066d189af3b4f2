#include "dgeom/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace dgeom {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

double slope_error_bound(const SegmentGeometry& g) {
  const double c = std::cos(g.phi), s = std::sin(g.phi);
  const double t = (std::abs(c) + std::abs(s)) / g.s;
  if (!(g.s > 0.0) || t >= 1.0) throw std::domain_error("slope_error_bound: segment too short for bound");
  const double series = 1.0 - t + t * t;
  const double plus = std::atan(std::abs(s + c) / g.s * series);
  const double minus = std::atan(std::abs(s - c) / g.s * series);
  return std::max(plus, minus);
}

double d_dig(const SegmentGeometry& g) { return g.s * slope_error_bound(g); }

std::optional<double> d_dig_checked(const SegmentGeometry& g) {
  if (!(g.s > kSqrt2)) return std::nullopt;
  const double t = (std::abs(std::cos(g.phi)) + std::abs(std::sin(g.phi))) / g.s;
  if (t >= 1.0) return std::nullopt;
  return d_dig(g);
}

double d_dss(double phi) { return std::abs(std::sin(phi)) + std::abs(std::cos(phi)); }

double d_tan(double s) {
  if (!(s > kSqrt2)) throw std::domain_error("d_tan: requires s > sqrt(2)");
  return s * std::asin(kSqrt2 / s);
}

}  // namespace dgeom
