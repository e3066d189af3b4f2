#include <doctest.h>

#include "dgeom/contours.hpp"
#include "dgeom/curve.hpp"
#include "dgeom/raster.hpp"

#include <random>
#include <set>
#include <sstream>

using namespace dgeom;

TEST_CASE("digitize rounds to nearest integer") {
  CHECK(digitize({1.4, 2.6}) == PixelPoint{1, 3});
  CHECK(digitize({0.0, 0.0}) == PixelPoint{0, 0});
  CHECK(digitize({2.5, -2.5}) == PixelPoint{3, -3});
  CHECK(digitize({-2.5, 2.5}) == PixelPoint{-3, 3});
}

TEST_CASE("digitize tie rule: exhaustive half-integer scan") {
  // round-half-away-from-zero on every half-integer in a wide band
  for (int k = -50; k <= 50; ++k) {
    const double v = k + 0.5;
    const PixelPoint p = digitize({v, -v});
    const int expect = v > 0 ? k + 1 : k;  // away from zero
    CHECK(p.x == expect);
    CHECK(p.y == -expect);
  }
}

TEST_CASE("digitize stays within Chebyshev 0.5") {
  std::mt19937_64 rng(1);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 10000; ++i) {
    const RealPoint p{uni(-1000, 1000), uni(-1000, 1000)};
    const PixelPoint q = digitize(p);
    CHECK(std::abs(q.x - p.x) <= 0.5);
    CHECK(std::abs(q.y - p.y) <= 0.5);
  }
}

TEST_CASE("point_line_distance basics") {
  CHECK(point_line_distance({0, 0}, {2, 0}, {1, 1}) == doctest::Approx(1.0));
  CHECK(point_line_distance({0, 0}, {2, 2}, {1, 1}) == doctest::Approx(0.0));
  CHECK(point_line_distance({0, 0}, {1, 1}, {1, 0}) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(point_line_distance({1, 1}, {1, 1}, {0, 0}), std::invalid_argument);
}

TEST_CASE("point_line_distance symmetry and translation invariance") {
  std::mt19937_64 rng(2);
  auto uni = [&] { return double(rng() >> 11) * 0x1.0p-53 * 200.0 - 100.0; };
  for (int i = 0; i < 1000; ++i) {
    const RealPoint a{uni(), uni()}, b{uni(), uni()}, p{uni(), uni()};
    if (dist(a, b) < 1e-6) continue;
    const double d1 = point_line_distance(a, b, p);
    CHECK(point_line_distance(b, a, p) == doctest::Approx(d1));
    const double tx = uni(), ty = uni();
    const double d2 = point_line_distance({a.x + tx, a.y + ty}, {b.x + tx, b.y + ty},
                                          {p.x + tx, p.y + ty});
    CHECK(d2 == doctest::Approx(d1).epsilon(1e-9));
  }
}

TEST_CASE("max_pairwise_distance") {
  DigitalCurve c;
  c.points = {{0, 0}, {3, 4}};
  CHECK(max_pairwise_distance(c) == doctest::Approx(5.0));

  c.points.clear();
  for (int i = 0; i < 10; ++i) c.points.push_back({i, 0});
  CHECK(max_pairwise_distance(c) == doctest::Approx(9.0));

  c.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(max_pairwise_distance(c) == doctest::Approx(std::sqrt(2.0)));

  c.points = {{5, 5}};
  CHECK_THROWS(max_pairwise_distance(c));
}

TEST_CASE("max_pairwise_distance equals brute force on random curves") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    DigitalCurve c;
    int x = 0, y = 0;
    const size_t len = 2 + rng() % 199;
    for (size_t i = 0; i < len; ++i) {
      c.points.push_back({x, y});
      x += int(rng() % 3) - 1;
      y += int(rng() % 3) - 1;
    }
    dedupe_chain(c.points);
    if (c.size() < 2) continue;
    double brute = 0;
    for (size_t i = 0; i < c.size(); ++i)
      for (size_t j = 0; j < c.size(); ++j) brute = std::max(brute, dist(c[i], c[j]));
    CHECK(max_pairwise_distance(c) == doctest::Approx(brute));
  }
}

namespace {
Raster raster_from(const std::vector<std::string>& rows) {
  Raster r(int(rows[0].size()), int(rows.size()));
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x) r.at(x, y) = rows[y][size_t(x)] == '#' ? 255 : 0;
  return r;
}
}  // namespace

TEST_CASE("extract_contours: straight run") {
  Raster r(16, 5);
  for (int x = 2; x < 12; ++x) r.at(x, 2) = 255;
  const auto curves = extract_contours(r);
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].size() == 10);
  CHECK_FALSE(curves[0].closed);
  CHECK(is_connected_chain(curves[0]));
}

TEST_CASE("extract_contours: crossing runs split at the junction") {
  // 15x15 plus sign; the center and its four 8-neighbours on the arms have
  // more than 2 edge neighbours, so removal leaves four 5-pixel arms
  Raster r(15, 15);
  for (int i = 1; i < 14; ++i) {
    r.at(i, 7) = 255;
    r.at(7, i) = 255;
  }
  const auto curves = extract_contours(r);
  CHECK(curves.size() == 4);
  for (const auto& c : curves) {
    CHECK(c.size() == 5);
    CHECK_FALSE(c.closed);
    CHECK(is_connected_chain(c));
  }
  // brute-force: neighbour counts on the raster confirm exactly 5 removals
  int removed = 0;
  for (int y = 0; y < 15; ++y)
    for (int x = 0; x < 15; ++x) {
      if (!r.edge(x, y)) continue;
      int deg = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if ((dx || dy) && r.edge(x + dx, y + dy)) ++deg;
      removed += deg > 2;
    }
  CHECK(removed == 5);
}

TEST_CASE("extract_contours: short fragments are dropped") {
  Raster r(10, 10);
  r.at(1, 1) = r.at(2, 1) = r.at(3, 1) = 255;  // 3-pixel fragment
  CHECK(extract_contours(r).empty());
}

TEST_CASE("extract_contours: thin digital circle comes back closed") {
  Raster r(40, 40);
  std::vector<RealPoint> ring;
  for (int k = 0; k <= 720; ++k) {
    const double t = 2 * 3.141592653589793 * k / 720;
    ring.push_back({20 + 12 * std::cos(t), 20 + 12 * std::sin(t)});
  }
  auto px = digitize_polyline(ring);
  thin_chain(px, true);
  for (const auto& p : px) r.at(p.x, p.y) = 255;
  const auto curves = extract_contours(r);
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].closed);
  CHECK(is_connected_chain(curves[0]));
  CHECK(curves[0].size() == px.size());
}

TEST_CASE("extract_contours: axis-aligned ring corners count as junctions") {
  // near-corner pixels of a square ring have 3 edge neighbours, so the ring
  // decomposes into its four open sides
  std::vector<std::string> rows = {
      "............", ".##########.", ".#........#.", ".#........#.", ".#........#.",
      ".#........#.", ".#........#.", ".#........#.", ".#........#.", ".#........#.",
      ".##########.", "............",
  };
  const auto curves = extract_contours(raster_from(rows));
  CHECK(curves.size() == 4);
  for (const auto& c : curves) {
    CHECK_FALSE(c.closed);
    CHECK(c.size() == 6);
  }
}

TEST_CASE("extract_contours: outputs pairwise disjoint, empty raster ok") {
  CHECK(extract_contours(Raster(20, 20)).empty());

  Raster r(30, 12);
  for (int x = 2; x < 12; ++x) r.at(x, 2) = 255;
  for (int x = 2; x < 12; ++x) r.at(x, 8) = 255;
  const auto curves = extract_contours(r);
  REQUIRE(curves.size() == 2);
  std::set<std::pair<int, int>> seen;
  for (const auto& c : curves)
    for (const auto& p : c.points) CHECK(seen.insert({p.x, p.y}).second);
}

TEST_CASE("pnm round trips and variants") {
  Raster r(7, 5);
  r.at(1, 1) = 255;
  r.at(6, 4) = 255;

  std::ostringstream out;
  write_pgm(out, r);
  std::istringstream in(out.str());
  const Raster back = read_pnm(in);
  CHECK(back.width == 7);
  CHECK(back.height == 5);
  CHECK(back.data == r.data);

  std::istringstream p1("P1\n# comment\n3 2\n0 1 0\n1 0 1\n");
  const Raster a = read_pnm(p1);
  CHECK(a.edge(1, 0));
  CHECK(a.edge(0, 1));
  CHECK_FALSE(a.edge(0, 0));

  std::istringstream p2("P2\n3 2\n9\n0 9 0\n9 0 9\n");
  const Raster b = read_pnm(p2);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x) CHECK(b.edge(x, y) == a.edge(x, y));

  std::istringstream p4(std::string("P4\n3 2\n") + char(0b01000000) + char(0b10100000));
  const Raster c = read_pnm(p4);
  CHECK(c.data == a.data);

  std::istringstream bad("P7\n1 1\n");
  CHECK_THROWS(read_pnm(bad));
}

TEST_CASE("digitize_segment yields connected chains hugging the segment") {
  std::mt19937_64 rng(4);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 200; ++i) {
    const RealPoint a{uni(-50, 50), uni(-50, 50)}, b{uni(-50, 50), uni(-50, 50)};
    if (dist(a, b) < 1.0) continue;
    const auto chain = digitize_segment(a, b);
    DigitalCurve c;
    c.points = chain;
    if (chain.size() >= 2) CHECK(is_connected_chain(c));
    for (const auto& p : chain)
      CHECK(point_line_distance(a, b, to_real(p)) <= 0.5 * (std::abs(std::sin(std::atan2(b.y - a.y, b.x - a.x))) + std::abs(std::cos(std::atan2(b.y - a.y, b.x - a.x)))) + 1e-9);
  }
}
