#include <doctest.h>

#include "dgeom/bounds.hpp"
#include "dgeom/curve.hpp"
#include "dgeom/tangent.hpp"

#include <cmath>
#include <random>

using namespace dgeom;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_CASE("slope_error_bound hand values") {
  // phi = 0, s = 10: t = 0.1, series 0.91 -> atan(0.091)
  CHECK(slope_error_bound({10.0, 0.0}) == doctest::Approx(std::atan(0.091)).epsilon(1e-12));
  // decays like 1/s
  CHECK(slope_error_bound({1e7, 0.3}) < 2e-7);
  CHECK_THROWS_AS(slope_error_bound({1.2, kPi / 4}), std::domain_error);
}

TEST_CASE("d_dss values") {
  CHECK(d_dss(0.0) == doctest::Approx(1.0));
  CHECK(d_dss(kPi / 4) == doctest::Approx(std::sqrt(2.0)));
  CHECK(d_dss(kPi / 3) == doctest::Approx((std::sqrt(3.0) + 1.0) / 2.0));
  // max over phi is sqrt(2), attained at odd multiples of pi/4
  double best = 0;
  for (double phi = 0; phi < 2 * kPi; phi += 1e-4) best = std::max(best, d_dss(phi));
  CHECK(best == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("d_tan values and monotonicity") {
  CHECK(d_tan(2.0) == doctest::Approx(kPi / 2));
  CHECK(d_tan(1e4) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK_THROWS_AS(d_tan(1.0), std::domain_error);
  double prev = d_tan(std::sqrt(2.0) + 1e-6);
  CHECK(prev > std::sqrt(2.0));
  for (double s = 1.5; s < 50; s += 0.25) {
    const double v = d_tan(s);
    CHECK(v < prev + 1e-12);
    CHECK(v > std::sqrt(2.0));
    prev = v;
  }
}

TEST_CASE("d_dig converges to d_dss for long segments") {
  for (double phi = 0.0; phi < kPi; phi += kPi / 360.0)
    CHECK(std::abs(d_dig({1e4, phi}) - d_dss(phi)) <= 0.02);
  for (double phi = 0.0; phi < kPi; phi += kPi / 90.0)
    CHECK(std::abs(d_dig({100.0, phi}) - d_dss(phi)) <= 0.02);
}

TEST_CASE("corner enumeration oracle: actual slope error vs digital bound") {
  // worst rounding corners of both segment endpoints, against the
  // sign-maximized digitization bound used by the tangent estimator
  auto corner_max = [](double s, double phi) {
    const double x21 = s * std::cos(phi), y21 = s * std::sin(phi);
    const double m = std::tan(phi);
    double worst = 0.0;
    for (double dx : {-1.0, 1.0})
      for (double dy : {-1.0, 1.0}) {
        const double num = m * dx - dy;
        const double den = (1.0 + m * m) * x21 + dx + m * dy;
        worst = std::max(worst, std::abs(std::atan(num / den)));
      }
    return worst;
  };
  CHECK(corner_max(10.0, kPi / 6) <= deb_digital_bound(10.0, kPi / 6));
  std::mt19937_64 rng(5);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  for (int t = 0; t < 2000; ++t) {
    const double s = uni(3.0, 200.0);
    const double phi = uni(-1.5, 1.5);
    CHECK(corner_max(s, phi) <= deb_digital_bound(s, phi) + 1e-12);
  }
}

TEST_CASE("digitized chains never deviate beyond d_dig (Monte Carlo)") {
  std::mt19937_64 rng(6);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  for (int t = 0; t < 2000; ++t) {
    const double s = uni(5.0, 100.0);
    const double phi = uni(0.0, 2 * kPi);
    const RealPoint a{uni(-200, 200), uni(-200, 200)};
    const RealPoint b{a.x + s * std::cos(phi), a.y + s * std::sin(phi)};
    const double bound = d_dig({s, phi});
    for (const auto& p : digitize_segment(a, b))
      CHECK(point_line_distance(a, b, to_real(p)) <= bound + 1e-9);
  }
}
