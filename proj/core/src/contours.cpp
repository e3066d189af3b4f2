#include "dgeom/contours.hpp"

#include <algorithm>
#include <array>

namespace dgeom {

namespace {

constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, 1, 1, 1, 0, -1, -1, -1};

double shoelace(const std::vector<PixelPoint>& pts) {
  double s = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    s += double(p.x) * q.y - double(q.x) * p.y;
  }
  return 0.5 * s;
}

}  // namespace

std::vector<DigitalCurve> extract_contours(const Raster& edge_map, int min_length) {
  const int w = edge_map.width, h = edge_map.height;
  std::vector<uint8_t> on(size_t(w) * h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) on[size_t(y) * w + x] = edge_map.at(x, y) > 0;

  auto is_on = [&](int x, int y) {
    return x >= 0 && x < w && y >= 0 && y < h && on[size_t(y) * w + x];
  };
  auto degree = [&](int x, int y) {
    int n = 0;
    for (int k = 0; k < 8; ++k) n += is_on(x + kDx[k], y + kDy[k]);
    return n;
  };

  // Junction removal on the original map, applied in one pass.
  std::vector<PixelPoint> junctions;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (is_on(x, y) && degree(x, y) > 2) junctions.push_back({x, y});
  for (auto j : junctions) on[size_t(j.y) * w + j.x] = 0;

  std::vector<uint8_t> visited(size_t(w) * h, 0);
  auto seen = [&](PixelPoint p) -> uint8_t& { return visited[size_t(p.y) * w + p.x]; };

  auto trace = [&](PixelPoint start) {
    std::vector<PixelPoint> chain{start};
    seen(start) = 1;
    PixelPoint cur = start;
    for (;;) {
      bool advanced = false;
      for (int k = 0; k < 8; ++k) {
        const PixelPoint nxt{cur.x + kDx[k], cur.y + kDy[k]};
        if (is_on(nxt.x, nxt.y) && !seen(nxt)) {
          chain.push_back(nxt);
          seen(nxt) = 1;
          cur = nxt;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
    return chain;
  };

  std::vector<DigitalCurve> out;
  auto emit = [&](std::vector<PixelPoint> chain) {
    if (int(chain.size()) < min_length) return;
    DigitalCurve c;
    c.closed = chain.size() >= 4 && chebyshev(chain.front(), chain.back()) == 1;
    if (c.closed) {
      // canonical start: lexicographically smallest pixel, CCW traversal
      auto smallest = std::min_element(chain.begin(), chain.end(), [](PixelPoint a, PixelPoint b) {
        return std::pair(a.x, a.y) < std::pair(b.x, b.y);
      });
      std::rotate(chain.begin(), smallest, chain.end());
      if (shoelace(chain) < 0) std::reverse(chain.begin() + 1, chain.end());
    }
    c.points = std::move(chain);
    out.push_back(std::move(c));
  };

  // Open chains first, from degree-1 endpoints in scan order.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (is_on(x, y) && !visited[size_t(y) * w + x] && degree(x, y) == 1) emit(trace({x, y}));
  // Remaining chains are cycles (or isolated bits); start anywhere in scan order.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (is_on(x, y) && !visited[size_t(y) * w + x]) emit(trace({x, y}));
  return out;
}

}  // namespace dgeom
