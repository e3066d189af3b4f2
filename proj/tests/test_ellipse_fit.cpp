#include <doctest.h>

#include "dgeom/ellipse.hpp"
#include "dgeom/synth.hpp"

#include <chrono>
#include <random>

using namespace dgeom;

namespace {
constexpr double kPi = 3.141592653589793;

std::vector<PixelPoint> sample_ellipse(const EllipseGeometric& e, int n, double t0 = 0.0,
                                       double span = 2 * kPi) {
  std::vector<PixelPoint> out;
  for (int i = 0; i < n; ++i) out.push_back(digitize(ellipse_point(e, t0 + span * i / n)));
  dedupe_chain(out);
  return out;
}

bool close_ellipses(const EllipseGeometric& x, const EllipseGeometric& y, double tol_px,
                    double tol_theta) {
  const double dth = std::min(std::fmod(std::abs(x.theta_c - y.theta_c), kPi),
                              kPi - std::fmod(std::abs(x.theta_c - y.theta_c), kPi));
  return std::abs(x.a - y.a) < tol_px && std::abs(x.b - y.b) < tol_px &&
         std::abs(x.xc - y.xc) < tol_px && std::abs(x.yc - y.yc) < tol_px &&
         (y.a - y.b < 2.0 || dth < tol_theta);  // near-circles have no meaningful angle
}
}  // namespace

TEST_CASE("geometric_distance basics") {
  const EllipseGeometric circle{10, 10, 0, 0, 0};
  CHECK(geometric_distance(circle, {0, 0}) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(geometric_distance(circle, {10, 0}) == doctest::Approx(0.0).epsilon(1e-6));

  const EllipseGeometric e{20, 8, 0, 0, 0};
  CHECK(geometric_distance(e, {40, 0}) == doctest::Approx(20.0).epsilon(1e-4));
  CHECK(geometric_distance(e, ellipse_point(e, 1.234)) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("phi round trip: special cases") {
  const EllipseGeometric axis{50, 20, 0, 5, -7};
  const PhiVector pa = phi_forward(axis);
  CHECK(pa.phi2 == doctest::Approx(0.0));
  CHECK(pa.phi1 == doctest::Approx(20.0 * 20.0 / (50.0 * 50.0)));

  const EllipseGeometric circle{30, 30, 0, 100, 200};
  const PhiVector pc = phi_forward(circle);
  CHECK(pc.phi1 == doctest::Approx(1.0));
  CHECK(pc.phi2 == doctest::Approx(0.0));
  const auto back = phi_inverse(pc);
  REQUIRE(back.has_value());
  CHECK(back->theta_c == doctest::Approx(0.0));  // circle convention
}

TEST_CASE("phi_inverse rejects non-elliptic vectors") {
  CHECK_FALSE(phi_inverse({-0.5, 0, 0, 0, -1}).has_value());  // E1 fails
  CHECK_FALSE(phi_inverse({0.1, 2.0, 0, 0, -1}).has_value()); // q >= 0
}

TEST_CASE("phi round trip over random ellipses") {
  std::mt19937_64 rng(41);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  for (int t = 0; t < 10000; ++t) {
    EllipseGeometric e;
    e.b = uni(10, 150);
    e.a = uni(e.b, 150);
    e.theta_c = uni(0, kPi);
    e.xc = uni(-500, 500);
    e.yc = uni(-500, 500);
    const auto back = phi_inverse(phi_forward(e));
    REQUIRE(back.has_value());
    CHECK(std::abs(back->a - e.a) <= 1e-9 * std::max(1.0, e.a));
    CHECK(std::abs(back->b - e.b) <= 1e-9 * std::max(1.0, e.b));
    CHECK(std::abs(back->xc - e.xc) <= 1e-9 * std::max(1.0, std::abs(e.xc)));
    CHECK(std::abs(back->yc - e.yc) <= 1e-9 * std::max(1.0, std::abs(e.yc)));
    if (e.a - e.b > 1e-6) {
      const double dth = std::min(std::fmod(std::abs(back->theta_c - e.theta_c), kPi),
                                  kPi - std::fmod(std::abs(back->theta_c - e.theta_c), kPi));
      CHECK(dth <= 1e-9);
    }
  }
}

TEST_CASE("conic/geometric conversions invert each other") {
  std::mt19937_64 rng(42);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  for (int t = 0; t < 1000; ++t) {
    EllipseGeometric e;
    e.b = uni(5, 100);
    e.a = uni(e.b, 100);
    e.theta_c = uni(0, kPi);
    e.xc = uni(-200, 200);
    e.yc = uni(-200, 200);
    const auto back = conic_to_geometric(geometric_to_conic(e));
    REQUIRE(back.has_value());
    CHECK(close_ellipses(*back, e, 1e-6, 1e-6));
  }
}

TEST_CASE("fitzgibbon: too few points and exact-sample behaviour") {
  std::vector<PixelPoint> five = {{0, 0}, {10, 0}, {10, 10}, {0, 10}, {5, 15}};
  CHECK(fitzgibbon(five).rejected_reason == RejectReason::TooFewPoints);

  const EllipseGeometric truth{100, 60, kPi / 6, 150, 150};
  const auto pts = sample_ellipse(truth, 36);
  const FitResult r = fitzgibbon(pts);
  if (r.ok()) {  // exact-data degeneracy is a legitimate outcome
    CHECK(std::abs(r.ellipse->a - truth.a) < 1.0);
    CHECK(std::abs(r.ellipse->b - truth.b) < 1.0);
  } else {
    CHECK(r.rejected_reason == RejectReason::Degenerate);
  }
}

TEST_CASE("fitzgibbon accepted fits satisfy the elliptic constraint") {
  std::mt19937_64 rng(43);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  for (int t = 0; t < 50; ++t) {
    EllipseGeometric e;
    e.b = uni(20, 80);
    e.a = uni(e.b, 80);
    e.theta_c = uni(0, kPi);
    e.xc = uni(100, 200);
    e.yc = uni(100, 200);
    // noisy cloud around the boundary
    std::vector<PixelPoint> pts;
    for (int i = 0; i < 60; ++i) {
      const RealPoint p = ellipse_point(e, 2 * kPi * i / 60);
      pts.push_back(digitize({p.x + uni(-1.5, 1.5), p.y + uni(-1.5, 1.5)}));
    }
    const FitResult r = fitzgibbon(pts);
    REQUIRE(r.ok());
    CHECK(r.ellipse->a > 0);
    CHECK(r.ellipse->b > 0);
    CHECK(r.ellipse->b <= r.ellipse->a);
    CHECK(r.ellipse->theta_c >= 0);
    CHECK(r.ellipse->theta_c < kPi);
    CHECK(close_ellipses(*r.ellipse, e, 5.0, 0.5));
  }
}

TEST_CASE("nsaf: translation invariance and fitzgibbon agreement") {
  const EllipseGeometric truth{80, 50, 0.8, 150, 150};
  std::vector<PixelPoint> pts;
  std::mt19937_64 rng(44);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 50; ++i) {
    const RealPoint p = ellipse_point(truth, 2 * kPi * i / 50);
    pts.push_back(digitize({p.x + uni(-1, 1), p.y + uni(-1, 1)}));
  }
  const FitResult r0 = nsaf(pts);
  REQUIRE(r0.ok());

  std::vector<PixelPoint> shifted = pts;
  for (auto& p : shifted) {
    p.x += 1000;
    p.y -= 500;
  }
  const FitResult r1 = nsaf(shifted);
  REQUIRE(r1.ok());
  CHECK(r1.ellipse->a == doctest::Approx(r0.ellipse->a).epsilon(1e-6));
  CHECK(r1.ellipse->b == doctest::Approx(r0.ellipse->b).epsilon(1e-6));
  CHECK(r1.ellipse->xc == doctest::Approx(r0.ellipse->xc + 1000).epsilon(1e-6));
  CHECK(r1.ellipse->yc == doctest::Approx(r0.ellipse->yc - 500).epsilon(1e-6));

  const FitResult fg = fitzgibbon(pts);
  REQUIRE(fg.ok());
  CHECK(close_ellipses(*fg.ellipse, *r0.ellipse, 1e-5, 1e-5));
}

TEST_CASE("nsaf reduces the scatter condition number on far-centred data") {
  std::mt19937_64 rng(45);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  int ok = 0;
  for (int t = 0; t < 20; ++t) {
    EllipseGeometric e;
    e.b = uni(20, 80);
    e.a = uni(e.b, 80);
    e.theta_c = uni(0, kPi);
    e.xc = uni(450, 550);
    e.yc = uni(450, 550);
    std::vector<PixelPoint> pts;
    for (int i = 0; i < 50; ++i) {
      const RealPoint p = ellipse_point(e, 2 * kPi * i / 50);
      pts.push_back(digitize({p.x + uni(-1, 1), p.y + uni(-1, 1)}));
    }
    ok += scatter_condition_inf(pts, true) <= scatter_condition_inf(pts, false);
  }
  CHECK(ok == 20);
}

TEST_CASE("ellifit: exact samples of a known ellipse") {
  const EllipseGeometric truth{100, 60, kPi / 6, 150, 150};
  const auto pts = sample_ellipse(truth, 36);
  const FitResult r = ellifit(pts);
  REQUIRE(r.ok());
  CHECK(std::abs(r.ellipse->a - truth.a) < 0.5);
  CHECK(std::abs(r.ellipse->b - truth.b) < 0.5);
  CHECK(std::abs(r.ellipse->xc - truth.xc) < 0.5);
  CHECK(std::abs(r.ellipse->yc - truth.yc) < 0.5);
  const double dth = std::abs(r.ellipse->theta_c - truth.theta_c);
  CHECK(std::min(dth, kPi - dth) < kPi / 180.0);
  CHECK(r.mean_distance < 0.5);
}

TEST_CASE("ellifit: too few points and translation equivariance") {
  std::vector<PixelPoint> six = {{0, 0}, {10, 0}, {10, 10}, {0, 10}, {5, 15}, {5, -5}};
  CHECK(ellifit(six).rejected_reason == RejectReason::TooFewPoints);

  const EllipseGeometric truth{70, 40, 1.1, 100, 100};
  const auto pts = sample_ellipse(truth, 48);
  const FitResult r0 = ellifit(pts);
  REQUIRE(r0.ok());
  std::vector<PixelPoint> shifted = pts;
  for (auto& p : shifted) {
    p.x += 123;
    p.y += 456;
  }
  const FitResult r1 = ellifit(shifted);
  REQUIRE(r1.ok());
  CHECK(std::abs(r1.ellipse->a - r0.ellipse->a) <= 1e-9 * r0.ellipse->a);
  CHECK(std::abs(r1.ellipse->b - r0.ellipse->b) <= 1e-9 * r0.ellipse->b);
  CHECK(std::abs(r1.ellipse->theta_c - r0.ellipse->theta_c) <= 1e-9);
  CHECK(r1.ellipse->xc - r0.ellipse->xc == doctest::Approx(123.0).epsilon(1e-9));
  CHECK(r1.ellipse->yc - r0.ellipse->yc == doctest::Approx(456.0).epsilon(1e-9));
}

TEST_CASE("ellifit rejects digitized hyperbola branches") {
  std::mt19937_64 rng(46);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  int rejected = 0, accepted_valid = 0, total = 0;
  for (int t = 0; t < 50; ++t) {
    ConicCurveSpec spec;
    spec.l = uni(20, 150);
    spec.e = uni(1.2, 2.0);
    const double dth = uni(kPi / 2, kPi);
    spec.theta_min = kPi - dth;
    spec.theta_max = kPi + dth;
    DigitalCurve c;
    try {
      c = gen_conic_curve(spec);
    } catch (const std::exception&) {
      continue;
    }
    if (c.size() < 7) continue;
    ++total;
    const FitResult r = ellifit(c.points);
    if (!r.ok()) {
      ++rejected;
    } else if (r.ellipse->a < 200 && r.ellipse->b / r.ellipse->a > 0.1) {
      ++accepted_valid;  // experiment-level retention filters
    }
  }
  CHECK(total >= 40);
  CHECK(accepted_valid == 0);
  CHECK(rejected >= total * 9 / 10);
}

TEST_CASE("ellifit wall time scales roughly linearly") {
  const EllipseGeometric truth{120, 80, 0.4, 200, 200};
  auto run = [&](int n) {
    std::vector<PixelPoint> pts;  // raw samples, duplicates kept
    for (int i = 0; i < n; ++i) pts.push_back(digitize(ellipse_point(truth, 2 * kPi * i / n)));
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < 20; ++k) {
      volatile auto r = ellifit(pts).ok();
      (void)r;
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
           double(pts.size());
  };
  run(100);  // warm-up
  const double per_point_small = run(100);
  const double per_point_big = run(10000);
  CHECK(per_point_big <= 10.0 * per_point_small);  // generous linearity envelope
}
