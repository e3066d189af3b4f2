#include "dgeom/tangent.hpp"

#include <cmath>
#include <stdexcept>

namespace dgeom {

namespace {
constexpr double kRingTol = 0.7071067811865476;  // 1/sqrt(2)
constexpr double kPi = 3.141592653589793;

double normalize_slope_angle(double ang) {
  while (ang > kPi / 2) ang -= kPi;
  while (ang <= -kPi / 2) ang += kPi;
  return ang;
}
}  // namespace

TangentEstimate deb_tangent(const DigitalCurve& curve, size_t index, double R) {
  const size_t n = curve.size();
  if (index >= n) throw std::invalid_argument("deb_tangent: index out of range");
  if (!(R >= 2.0)) throw std::invalid_argument("deb_tangent: R must be >= 2");
  const PixelPoint p0 = curve[index];

  auto walk = [&](int step) -> size_t {
    size_t steps = 0;
    long j = long(index);
    for (;;) {
      j += step;
      if (curve.closed) {
        j = (j % long(n) + long(n)) % long(n);
      } else if (j < 0 || j >= long(n)) {
        throw std::runtime_error("deb_tangent: insufficient arc");
      }
      if (++steps >= n) throw std::runtime_error("deb_tangent: insufficient arc");
      if (std::abs(dist(curve[size_t(j)], p0) - R) < kRingTol) return size_t(j);
    }
  };

  TangentEstimate est;
  est.anchor = p0;
  est.radius_used = R;
  est.i1 = walk(-1);
  est.i2 = walk(+1);
  est.p1 = curve[est.i1];
  est.p2 = curve[est.i2];
  if (est.p1 == est.p2) throw std::runtime_error("deb_tangent: insufficient arc");
  est.slope_angle =
      normalize_slope_angle(std::atan2(double(est.p2.y - est.p1.y), double(est.p2.x - est.p1.x)));
  return est;
}

double deb_digital_bound(double s, double phi) {
  if (!(s > 0)) throw std::domain_error("deb_digital_bound: s must be positive");
  const double c = std::cos(phi), sn = std::sin(phi);
  double best = 0.0;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1})
      for (int s3 : {-1, 1}) {
        const double f1 = std::abs(sn + s1 * c);
        const double u = s2 * c + s3 * sn;
        const double val = f1 / (s * s * s) * std::abs(s * s - s * u + u * u);
        best = std::max(best, val);
      }
  return best;
}

RealPoint conic_point(const ConicSpec& c, double theta) {
  double r;
  if (c.e == 0.0) {
    r = c.a;
  } else {
    const double k = 1.0 - c.e * std::cos(theta);
    if (!(k > 0)) throw std::domain_error("conic_point: theta outside bounded branch");
    r = c.a * c.e / k;
  }
  return {r * std::cos(theta), r * std::sin(theta)};
}

double conic_slope_angle(const ConicSpec& c, double theta) {
  if (c.e == 0.0)  // circle tangent is perpendicular to the radius
    return normalize_slope_angle(theta + kPi / 2);
  const double m0 = (c.e - std::cos(theta)) / std::sin(theta);
  return normalize_slope_angle(std::atan(m0));
}

std::optional<std::pair<double, double>> conic_ring_crossings(const ConicSpec& c, double theta0,
                                                              double R) {
  const RealPoint p0 = conic_point(c, theta0);
  auto valid = [&](double th) { return c.e == 0.0 || 1.0 - c.e * std::cos(th) > 1e-9; };
  auto f = [&](double th) { return dist(conic_point(c, th), p0) - R; };

  auto solve_side = [&](int side) -> std::optional<double> {
    double lo = 0.0, hi = side * 1e-4;
    for (int k = 0; k < 60; ++k) {
      if (!valid(theta0 + hi) || std::abs(hi) > kPi) return std::nullopt;
      if (f(theta0 + hi) >= 0.0) break;
      lo = hi;
      hi *= 2.0;
      if (k == 59) return std::nullopt;
    }
    if (f(theta0 + hi) < 0.0) return std::nullopt;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (f(theta0 + mid) < 0.0 ? lo : hi) = mid;
    }
    return theta0 + 0.5 * (lo + hi);
  };

  const auto t1 = solve_side(-1), t2 = solve_side(+1);
  if (!t1 || !t2) return std::nullopt;
  return std::pair{*t1, *t2};
}

DebBounds deb_bounds(const ConicSpec& c, double theta0, double R) {
  DebBounds b;
  if (c.e > 0.0) {
    const double d_max = (1.0 + 1.0 / c.e) * (R / c.a);
    if (d_max >= 1.0) throw std::domain_error("deb_bounds: R too large for conic");
    const double k0 = 1.0 - c.e * std::cos(theta0);
    const double st = std::sin(theta0), ct = std::cos(theta0);
    const double Q = c.e * c.e * st * st + k0 * k0;
    const double D = k0 * k0 * (R / (c.a * c.e)) / std::sqrt(Q);
    // |0.5 e d D^3 csc(t0) / (1 + m0^2)| with the sin(t0) factors cancelled,
    // so the expression stays regular at t0 in {0, pi}
    const double denom = st * st + (c.e - ct) * (c.e - ct);
    b.analytic = std::abs(0.5 * c.e * c.e * D * D * D / k0 * (st * st / denom));
  }
  const auto cross = conic_ring_crossings(c, theta0, R);
  if (!cross) throw std::domain_error("deb_bounds: ring crossings not found");
  const RealPoint p1 = conic_point(c, cross->first), p2 = conic_point(c, cross->second);
  const double s = dist(p1, p2);
  const double phi = std::atan2(p2.y - p1.y, p2.x - p1.x);
  b.digital = deb_digital_bound(s, phi);
  b.total = b.analytic + b.digital;
  return b;
}

double choose_R(double rho_min, double D_tol, double h) {
  if (!(rho_min > 0) || !(D_tol > 0) || !(h > 0))
    throw std::invalid_argument("choose_R: arguments must be positive");
  return D_tol * rho_min * h;
}

RealPoint yuen_center(RealPoint p1, RealPoint p2, RealPoint p3, double t1, double t2, double t3) {
  const double m1 = std::tan(t1), m2 = std::tan(t2), m3 = std::tan(t3);
  const double x1 = p1.x, y1 = p1.y, x2 = p2.x, y2 = p2.y, x3 = p3.x, y3 = p3.y;

  const double A12 = y2 * y2 - y1 * y1 - (x2 * y2 - x1 * y1) * (m1 + m2) + (x2 * x2 - x1 * x1) * m1 * m2;
  const double A23 = y3 * y3 - y2 * y2 - (x3 * y3 - x2 * y2) * (m2 + m3) + (x3 * x3 - x2 * x2) * m2 * m3;
  const double B12 = (y2 - y1) * (m1 + m2) - 2.0 * (x2 - x1) * m1 * m2;
  const double B23 = (y3 - y2) * (m2 + m3) - 2.0 * (x3 - x2) * m2 * m3;
  const double C12 = 2.0 * (y2 - y1) - (x2 - x1) * (m1 + m2);
  const double C23 = 2.0 * (y3 - y2) - (x3 - x2) * (m2 + m3);

  const double den = B12 * C23 - B23 * C12;
  if (!std::isfinite(den) || std::abs(den) < 1e-9) throw std::runtime_error("yuen degenerate");
  const RealPoint o{-(A12 * C23 - A23 * C12) / den, -(A12 * B23 - A23 * B12) / den};
  if (!std::isfinite(o.x) || !std::isfinite(o.y)) throw std::runtime_error("yuen degenerate");
  return o;
}

double center_error(RealPoint actual, RealPoint computed) { return dist(actual, computed); }

}  // namespace dgeom
