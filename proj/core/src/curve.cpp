#include "dgeom/curve.hpp"

#include <algorithm>

namespace dgeom {

PixelPoint digitize(RealPoint p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw std::invalid_argument("digitize: non-finite point");
  // std::round rounds halves away from zero, which is the tie rule we pin.
  return {int32_t(std::lround(p.x)), int32_t(std::lround(p.y))};
}

double line_side_value(RealPoint a, RealPoint b, RealPoint p) {
  return p.x * (a.y - b.y) + p.y * (b.x - a.x) + b.y * a.x - a.y * b.x;
}

double point_line_distance(RealPoint a, RealPoint b, RealPoint p) {
  const double den = dist(a, b);
  if (den == 0.0) throw std::invalid_argument("point_line_distance: degenerate line");
  return std::abs(line_side_value(a, b, p)) / den;
}

double max_pairwise_distance(const std::vector<PixelPoint>& pts, size_t first, size_t last) {
  if (last <= first) throw std::invalid_argument("max_pairwise_distance: need at least 2 points");
  double best2 = 0.0;
  for (size_t i = first; i <= last; ++i)
    for (size_t j = i + 1; j <= last; ++j) {
      const double dx = double(pts[j].x - pts[i].x);
      const double dy = double(pts[j].y - pts[i].y);
      best2 = std::max(best2, dx * dx + dy * dy);
    }
  return std::sqrt(best2);
}

double max_pairwise_distance(const DigitalCurve& c) {
  if (c.size() < 2) throw std::invalid_argument("max_pairwise_distance: need at least 2 points");
  return max_pairwise_distance(c.points, 0, c.size() - 1);
}

void dedupe_chain(std::vector<PixelPoint>& pts) {
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

void thin_chain(std::vector<PixelPoint>& pts, bool closed) {
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    const size_t lo = closed ? 0 : 1;
    for (size_t i = lo; i < pts.size() - (closed ? 0 : 1) && pts.size() >= 3;) {
      const size_t n = pts.size();
      const PixelPoint prev = pts[(i + n - 1) % n];
      const PixelPoint next = pts[(i + 1) % n];
      if (chebyshev(prev, next) == 1) {
        pts.erase(pts.begin() + ptrdiff_t(i));
        changed = true;
      } else {
        ++i;
      }
    }
  }
}

std::vector<PixelPoint> digitize_segment(RealPoint a, RealPoint b) {
  const double len = dist(a, b);
  const int n = std::max(1, int(std::ceil(len / 0.4)));
  std::vector<PixelPoint> out;
  out.reserve(size_t(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    out.push_back(digitize({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}));
  }
  dedupe_chain(out);
  thin_chain(out);
  return out;
}

std::vector<PixelPoint> digitize_polyline(const std::vector<RealPoint>& pts) {
  std::vector<PixelPoint> out;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    auto seg = digitize_segment(pts[i], pts[i + 1]);
    if (!out.empty() && !seg.empty() && out.back() == seg.front())
      out.insert(out.end(), seg.begin() + 1, seg.end());
    else
      out.insert(out.end(), seg.begin(), seg.end());
  }
  dedupe_chain(out);
  thin_chain(out);
  return out;
}

bool is_connected_chain(const DigitalCurve& c) {
  if (c.size() < 2) return false;
  for (size_t i = 0; i + 1 < c.size(); ++i) {
    const int d = chebyshev(c[i], c[i + 1]);
    if (d != 1) return false;
  }
  if (c.closed && chebyshev(c.points.front(), c.points.back()) != 1) return false;
  return true;
}

}  // namespace dgeom
