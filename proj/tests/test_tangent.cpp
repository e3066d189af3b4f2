#include <doctest.h>

#include "dgeom/curve.hpp"
#include "dgeom/synth.hpp"
#include "dgeom/tangent.hpp"

#include <random>

using namespace dgeom;

namespace {
constexpr double kPi = 3.141592653589793;

double angle_diff(double a, double b) {
  double d = std::abs(a - b);
  while (d > kPi / 2) d = std::abs(d - kPi);
  return d;
}

// exact boundary point and tangent of a rotated ellipse at parameter t
struct EllipseOracle {
  double a, b, th, xc, yc;
  RealPoint point(double t) const {
    const double c = std::cos(th), s = std::sin(th);
    const double u = a * std::cos(t), v = b * std::sin(t);
    return {xc + u * c - v * s, yc + u * s + v * c};
  }
  double tangent_angle(double t) const {
    const double c = std::cos(th), s = std::sin(th);
    const double dx = -a * std::sin(t) * c - b * std::cos(t) * s;
    const double dy = -a * std::sin(t) * s + b * std::cos(t) * c;
    return std::atan2(dy, dx);
  }
};
}  // namespace

TEST_CASE("deb_tangent is exact on straight digital segments") {
  DigitalCurve c;
  for (int i = 0; i < 40; ++i) c.points.push_back({i, 0});
  const auto est = deb_tangent(c, 20, 5.0);
  CHECK(est.slope_angle == doctest::Approx(0.0));
  CHECK(est.anchor == PixelPoint{20, 0});

  DigitalCurve d;
  for (int i = 0; i < 40; ++i) d.points.push_back({i, i});
  CHECK(deb_tangent(d, 20, 5.0).slope_angle == doctest::Approx(kPi / 4));
}

TEST_CASE("deb_tangent near open ends raises insufficient arc") {
  DigitalCurve c;
  for (int i = 0; i < 30; ++i) c.points.push_back({i, 0});
  CHECK_THROWS_WITH_AS(deb_tangent(c, 1, 10.0), "deb_tangent: insufficient arc",
                       std::runtime_error);
  CHECK_THROWS_AS(deb_tangent(c, 29, 4.0), std::runtime_error);
}

TEST_CASE("deb_tangent on a digital circle stays within the error bound") {
  EllipseGeometric e{100, 100, 0.0, 150, 150};
  const DigitalCurve c = gen_ellipse_arc(e, 0.0, 2 * kPi);
  REQUIRE(c.closed);
  const ConicSpec circle{0.0, 100.0};
  int checked = 0;
  for (size_t i = 0; i < c.size(); i += 7) {
    const double theta = std::atan2(c[i].y - 150.0, c[i].x - 150.0);
    const auto est = deb_tangent(c, i, 10.0);
    const double truth = std::atan(std::tan(theta + kPi / 2));
    const DebBounds b = deb_bounds(circle, theta, 10.0);
    CHECK(angle_diff(est.slope_angle, truth) <= b.total + 0.012);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("deb_tangent walk length is bounded by the ring radius") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const double rho = 20.0 + double(rng() % 980);
    EllipseGeometric e{rho, rho, 0.0, 1200, 1200};
    const DigitalCurve c = gen_ellipse_arc(e, 0.0, 2 * kPi);
    const double R = 10.0;
    const size_t i = rng() % c.size();
    const auto est = deb_tangent(c, i, R);
    const size_t n = c.size();
    auto steps = [&](size_t j) { return std::min((j + n - i) % n, (i + n - j) % n); };
    CHECK(steps(est.i1) + steps(est.i2) <= 2 * size_t(std::ceil(R)) + 2);
  }
}

TEST_CASE("deb_bounds: circles have zero analytic part") {
  const ConicSpec circle{0.0, 50.0};
  for (double t : {0.5, 1.2, 2.0, 4.0})
    CHECK(deb_bounds(circle, t, 5.0).analytic == doctest::Approx(0.0));
}

TEST_CASE("deb_bounds: errors when the ring is too large") {
  const ConicSpec tight{0.5, 20.0};  // D_max = 3 R / 20
  CHECK_THROWS_AS(deb_bounds(tight, 1.0, 10.0), std::domain_error);
}

TEST_CASE("deb analytic bound reproduces the reported family maxima") {
  // conic family a = 200, R = 10: max analytic ~ 0.035 deg (at e = 0.1)
  double worst = 0.0;
  for (double e = 0.1; e < 1.05; e += 0.1) {
    const ConicSpec c{e, 200.0};
    for (double t = 0.02; t < 2 * kPi; t += 0.01)
      if (std::abs(std::sin(t)) > 1e-3 && (e < 1.0 || std::cos(t) < 1.0 / e - 1e-2))
        worst = std::max(worst, deb_bounds(c, t, 10.0).analytic);
  }
  CHECK(worst * 180.0 / kPi == doctest::Approx(0.035).epsilon(0.15));

  // parabola family a in [30, 500], R = 10: max ~ 0.3913 deg (at a = 30)
  double worst_p = 0.0;
  for (double t = 0.02; t < 2 * kPi - 0.02; t += 0.005) {
    if (std::cos(t) > 0.98) continue;
    worst_p = std::max(worst_p, deb_bounds({1.0, 30.0}, t, 10.0).analytic);
  }
  CHECK(worst_p * 180.0 / kPi == doctest::Approx(0.3913).epsilon(0.03));
}

TEST_CASE("choose_R follows the rule of thumb") {
  CHECK(choose_R(20, 0.5) == doctest::Approx(10.0));
  CHECK(choose_R(5, 0.5) == doctest::Approx(2.5));
  CHECK(choose_R(20, 0.5, 0.5) == doctest::Approx(5.0));
  CHECK_THROWS(choose_R(-1, 0.5));
}

TEST_CASE("yuen_center is exact for exact tangents: standard ellipse") {
  const EllipseOracle e{100, 60, 0.0, 0, 0};
  const double al[3] = {-5 * kPi / 12, kPi / 4, 11 * kPi / 12};
  RealPoint p[3];
  double t[3];
  for (int i = 0; i < 3; ++i) {
    p[i] = e.point(al[i]);
    t[i] = e.tangent_angle(al[i]);
  }
  const RealPoint c = yuen_center(p[0], p[1], p[2], t[0], t[1], t[2]);
  CHECK(center_error({0, 0}, c) <= 1e-9);
}

TEST_CASE("yuen_center exact on circles") {
  const EllipseOracle e{42, 42, 0.0, 17, -8};
  const RealPoint c = yuen_center(e.point(0.4), e.point(1.7), e.point(3.9), e.tangent_angle(0.4),
                                  e.tangent_angle(1.7), e.tangent_angle(3.9));
  CHECK(center_error({17, -8}, c) <= 1e-9);
}

TEST_CASE("yuen_center error grows with tangent perturbation") {
  const EllipseOracle e{100, 60, 0.0, 0, 0};
  const double al[3] = {-5 * kPi / 12, kPi / 4, 11 * kPi / 12};
  auto err_at = [&](double dtheta) {
    const RealPoint c =
        yuen_center(e.point(al[0]), e.point(al[1]), e.point(al[2]), e.tangent_angle(al[0]),
                    e.tangent_angle(al[1]) + dtheta, e.tangent_angle(al[2]));
    return center_error({0, 0}, c) / 100.0;
  };
  CHECK(err_at(5 * kPi / 180) > 0.0);
  CHECK(err_at(10 * kPi / 180) > err_at(5 * kPi / 180));
  CHECK(err_at(2 * kPi / 180) < err_at(5 * kPi / 180));
}

TEST_CASE("yuen_center agrees with the geometric construction oracle") {
  // construction: intersect tangent lines pairwise, join to chord midpoints,
  // intersect the two joining lines
  std::mt19937_64 rng(33);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  auto line_cross = [](RealPoint p1, double a1, RealPoint p2, double a2) -> RealPoint {
    const double d1x = std::cos(a1), d1y = std::sin(a1), d2x = std::cos(a2), d2y = std::sin(a2);
    const double det = d1x * d2y - d1y * d2x;
    const double t = ((p2.x - p1.x) * d2y - (p2.y - p1.y) * d2x) / det;
    return {p1.x + t * d1x, p1.y + t * d1y};
  };
  int done = 0;
  for (int trial = 0; trial < 300 && done < 100; ++trial) {
    const EllipseOracle e{uni(20, 150), uni(10, 20), uni(0, kPi), uni(-50, 50), uni(-50, 50)};
    if (e.b > e.a) continue;
    const double a1 = uni(0.2, 1.4), a2 = uni(1.8, 2.9), a3 = uni(3.5, 5.5);
    bool skip = false;
    for (double al : {a1, a2, a3})
      if (std::abs(std::sin(al)) < 0.15 || std::abs(std::cos(al)) < 0.15) skip = true;
    if (skip) continue;
    RealPoint p[3] = {e.point(a1), e.point(a2), e.point(a3)};
    double t[3] = {e.tangent_angle(a1), e.tangent_angle(a2), e.tangent_angle(a3)};
    RealPoint alg;
    try {
      alg = yuen_center(p[0], p[1], p[2], t[0], t[1], t[2]);
    } catch (const std::runtime_error&) {
      continue;
    }
    const RealPoint x12 = line_cross(p[0], t[0], p[1], t[1]);
    const RealPoint x23 = line_cross(p[1], t[1], p[2], t[2]);
    const RealPoint m12{0.5 * (p[0].x + p[1].x), 0.5 * (p[0].y + p[1].y)};
    const RealPoint m23{0.5 * (p[1].x + p[2].x), 0.5 * (p[1].y + p[2].y)};
    const RealPoint geo = line_cross(m12, std::atan2(x12.y - m12.y, x12.x - m12.x), m23,
                                     std::atan2(x23.y - m23.y, x23.x - m23.x));
    CHECK(center_error(alg, geo) <= 1e-6 * std::max(1.0, std::abs(alg.x) + std::abs(alg.y)));
    CHECK(center_error({e.xc, e.yc}, alg) <= 1e-7 * e.a);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("center_error basics") {
  CHECK(center_error({0, 0}, {0, 0}) == doctest::Approx(0.0));
  CHECK(center_error({0, 0}, {3, 4}) == doctest::Approx(5.0));
  CHECK(center_error({10, 20}, {13, 24}) == doctest::Approx(5.0));
}

TEST_CASE("yuen degeneracy raises on collinear samples") {
  // collinear sample points make the midpoint-chord lines parallel
  CHECK_THROWS_WITH_AS(yuen_center({0, 0}, {1, 1}, {2, 2}, 0.3, 0.3, 0.3), "yuen degenerate",
                       std::runtime_error);
  CHECK_THROWS_AS(yuen_center({0, 0}, {4, 0}, {9, 0}, 0.1, 0.1, 0.1), std::runtime_error);
}
