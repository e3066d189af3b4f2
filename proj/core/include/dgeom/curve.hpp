#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dgeom {

struct PixelPoint {
  int32_t x = 0;
  int32_t y = 0;
  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

struct RealPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const RealPoint&, const RealPoint&) = default;
};

inline RealPoint to_real(PixelPoint p) { return {double(p.x), double(p.y)}; }

inline double dist(RealPoint a, RealPoint b) { return std::hypot(b.x - a.x, b.y - a.y); }
inline double dist(PixelPoint a, PixelPoint b) { return std::hypot(double(b.x - a.x), double(b.y - a.y)); }

/// Chebyshev (8-connectivity) distance between pixels.
inline int chebyshev(PixelPoint a, PixelPoint b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// Nearest-integer digitization, ties rounded half away from zero.
PixelPoint digitize(RealPoint p);

/// Perpendicular distance of p from the infinite line through a and b.
/// Throws std::invalid_argument on a degenerate (a == b) line.
double point_line_distance(RealPoint a, RealPoint b, RealPoint p);

/// Signed version of the same expression; the sign identifies the side of
/// the line on which p lies (zero on the line).
double line_side_value(RealPoint a, RealPoint b, RealPoint p);

/// An ordered chain of pixels. Chains sourced from edge maps are 8-connected
/// with no immediate repeats; `closed` marks chains whose ends are adjacent
/// (the first pixel is not duplicated at the end).
struct DigitalCurve {
  std::vector<PixelPoint> points;
  bool closed = false;

  size_t size() const { return points.size(); }
  const PixelPoint& operator[](size_t i) const { return points[i]; }
};

struct LineSegment {
  RealPoint a;
  RealPoint b;

  double length() const { return dist(a, b); }
  /// Angle with the x-axis in (-pi, pi].
  double angle() const { return std::atan2(b.y - a.y, b.x - a.x); }
};

/// Exact maximum pairwise Euclidean distance (s_max). O(n^2).
double max_pairwise_distance(const DigitalCurve& c);
double max_pairwise_distance(const std::vector<PixelPoint>& pts, size_t first, size_t last);

/// Digitize the segment a-b into an 8-connected pixel chain: dense samples
/// (spacing < 0.5 px) are rounded and consecutive duplicates dropped.
std::vector<PixelPoint> digitize_segment(RealPoint a, RealPoint b);

/// Digitize a polyline of real points into one 8-connected chain.
std::vector<PixelPoint> digitize_polyline(const std::vector<RealPoint>& pts);

/// Drop consecutive duplicates in place.
void dedupe_chain(std::vector<PixelPoint>& pts);

/// Minimal-chain thinning: drops every pixel whose two chain neighbours are
/// themselves 8-adjacent (the redundant corner pixel of an E,N,E step).
/// Rounded dense samples produce such corners; thinned edge maps do not.
void thin_chain(std::vector<PixelPoint>& pts, bool closed = false);

/// True when consecutive points (and the wrap pair, if closed) are 8-adjacent
/// and there are no immediate repeats.
bool is_connected_chain(const DigitalCurve& c);

}  // namespace dgeom
