#include "dgeom/detect.hpp"

#include "dgeom/contours.hpp"
#include "dgeom/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace dgeom {

namespace {

constexpr double kPi = 3.141592653589793;

RealPoint vertex(const DigitalCurve& c, const PolyApprox& pa, size_t k) {
  return to_real(c[pa.indices[k % pa.indices.size()]]);
}

double angle_between_edges(RealPoint a, RealPoint b, RealPoint c) {
  // anticlockwise angle from edge b->c to edge a->b
  const double ux = c.x - b.x, uy = c.y - b.y;  // l_{i+1}
  const double vx = b.x - a.x, vy = b.y - a.y;  // l_i
  return std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
}

// Endpoint tangent: the regular two-sided ring walk is impossible at the
// end of an open chain, so the chord from the endpoint to the inward ring
// crossing stands in for it.
std::optional<double> endpoint_tangent(const DigitalCurve& c, size_t index, double R) {
  if (c.closed) {
    try {
      return deb_tangent(c, index, R).slope_angle;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  const PixelPoint p0 = c[index];
  const int step = index == 0 ? 1 : -1;
  for (long j = long(index) + step; j >= 0 && j < long(c.size()); j += step) {
    if (std::abs(dist(c[size_t(j)], p0) - R) < 0.7071067811865476) {
      const double ang = std::atan2(double(c[size_t(j)].y - p0.y), double(c[size_t(j)].x - p0.x));
      return std::atan(std::tan(ang));  // fold into (-pi/2, pi/2]
    }
  }
  return std::nullopt;
}

uint64_t draw(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

struct OrientedLine {
  RealPoint base;
  double dx, dy;
  int side(RealPoint p) const {
    const double v = dx * (p.y - base.y) - dy * (p.x - base.x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  }
};

}  // namespace

std::vector<double> turn_angles(const DigitalCurve& curve, const PolyApprox& approx) {
  const size_t n = approx.indices.size();
  if (n < 2) throw std::invalid_argument("turn_angles: need >= 2 polygon edges");
  std::vector<double> out;
  if (!approx.closed) {
    for (size_t k = 0; k + 2 < n; ++k)
      out.push_back(angle_between_edges(vertex(curve, approx, k), vertex(curve, approx, k + 1),
                                        vertex(curve, approx, k + 2)));
  } else {
    for (size_t k = 0; k < n; ++k)
      out.push_back(angle_between_edges(vertex(curve, approx, k), vertex(curve, approx, k + 1),
                                        vertex(curve, approx, k + 2)));
  }
  return out;
}

std::vector<size_t> sharp_turn_vertices(const std::vector<double>& angles, double theta0) {
  std::vector<size_t> out;
  for (size_t k = 0; k < angles.size(); ++k)
    if (std::abs(angles[k]) >= theta0) out.push_back(k + 1);
  return out;
}

std::vector<size_t> inflexion_splits(const std::vector<double>& angles) {
  if (angles.size() < 2) return {};
  const size_t nb = angles.size() - 1;
  std::vector<uint8_t> b(nb);
  for (size_t k = 0; k < nb; ++k)
    b[k] = std::abs(angles[k] + angles[k + 1]) < std::abs(angles[k]) + std::abs(angles[k + 1]);

  std::vector<size_t> out;
  for (size_t k = 0; k < nb;) {
    if (!b[k]) {
      ++k;
      continue;
    }
    size_t run = 1;
    while (k + run < nb && b[k + run]) ++run;
    if (run == 1) {
      out.push_back(k + 1);
    } else if (run == 2) {
      out.push_back(k + 1);
      out.push_back(k + 2);
    } else {
      out.push_back(k + 1);
    }
    k += run;
  }
  return out;
}

std::vector<SmoothContour> extract_smooth_contours(const std::vector<DigitalCurve>& contours,
                                                   const DetectParams& params) {
  std::vector<SmoothContour> out;
  for (const auto& curve : contours) {
    std::vector<std::pair<size_t, size_t>> pieces;  // [first, last] pixel index ranges
    PolyApprox pa = rdp_mod(curve);
    const std::vector<double> ang = turn_angles(curve, pa);

    // vertex positions (into the polygon) needing a split
    std::set<size_t> split_vertices;
    for (size_t v : sharp_turn_vertices(ang, params.sharp_turn)) split_vertices.insert(v);
    for (size_t v : inflexion_splits(ang)) split_vertices.insert(v);

    std::vector<size_t> cuts;  // pixel indices
    for (size_t v : split_vertices) cuts.push_back(pa.indices[v % pa.indices.size()]);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const size_t n = curve.size();
    if (cuts.empty()) {
      pieces.emplace_back(0, n - 1);
    } else if (!curve.closed) {
      size_t prev = 0;
      for (size_t c : cuts) {
        if (c > prev) pieces.emplace_back(prev, c);
        prev = c;
      }
      if (prev < n - 1) pieces.emplace_back(prev, n - 1);
    } else {
      // closed contour with cuts: arcs between consecutive cuts, wrapping
      for (size_t k = 0; k < cuts.size(); ++k) {
        const size_t from = cuts[k];
        const size_t to = cuts[(k + 1) % cuts.size()];
        pieces.emplace_back(from, to);  // to may be < from: wraps
      }
    }

    for (auto [first, last] : pieces) {
      DigitalCurve piece;
      if (cuts.empty() && curve.closed) {
        piece = curve;  // still closed
      } else if (last >= first) {
        piece.points.assign(curve.points.begin() + first, curve.points.begin() + last + 1);
      } else {
        piece.points.assign(curve.points.begin() + first, curve.points.end());
        piece.points.insert(piece.points.end(), curve.points.begin(),
                            curve.points.begin() + last + 1);
      }
      if (piece.size() < 5) continue;

      SmoothContour sc;
      sc.id = out.size();
      sc.curve = std::move(piece);
      sc.approx = cuts.empty() && curve.closed ? pa : rdp_mod(sc.curve);
      sc.midpoint = sc.curve[sc.curve.size() / 2];
      const auto t1 = endpoint_tangent(sc.curve, 0, params.deb_radius);
      const auto t2 = endpoint_tangent(sc.curve, sc.curve.size() - 1, params.deb_radius);
      sc.tangents_ok = t1.has_value() && t2.has_value();
      sc.tangent_start = t1.value_or(0.0);
      sc.tangent_end = t2.value_or(0.0);
      out.push_back(std::move(sc));
    }
  }
  return out;
}

bool search_region_accepts(const SmoothContour& host, const SmoothContour& cand) {
  if (!host.tangents_ok) return false;
  const RealPoint pa = to_real(host.curve.points.front());
  const RealPoint pb = to_real(host.curve.points.back());
  const RealPoint mid = to_real(host.midpoint);
  if (pa == pb) return false;

  const OrientedLine l1{pa, std::cos(host.tangent_start), std::sin(host.tangent_start)};
  const OrientedLine l2{pb, std::cos(host.tangent_end), std::sin(host.tangent_end)};
  const OrientedLine l3{pa, pb.x - pa.x, pb.y - pa.y};
  const int m1 = l1.side(mid), m2 = l2.side(mid), m3 = l3.side(mid);
  if (m1 == 0 || m2 == 0 || m3 == 0) return false;  // degenerate geometry

  for (const auto& px : cand.curve.points) {
    const RealPoint p = to_real(px);
    const int s1 = l1.side(p), s2 = l2.side(p), s3 = l3.side(p);
    // pixels exactly on a line count as the midpoint side
    if ((s1 != 0 && s1 != m1) || (s2 != 0 && s2 != m2)) return false;
    if (s3 == 0 || s3 == m3) return false;  // S3 needs the opposite side
  }
  return true;
}

bool associated_convexity_ok(const SmoothContour& c1, const SmoothContour& c2, double tol) {
  const RealPoint a1 = to_real(c1.curve.points.front()), b1 = to_real(c1.curve.points.back());
  const RealPoint a2 = to_real(c2.curve.points.front()), b2 = to_real(c2.curve.points.back());
  const RealPoint p1{0.5 * (a1.x + b1.x), 0.5 * (a1.y + b1.y)};
  const RealPoint p2{0.5 * (a2.x + b2.x), 0.5 * (a2.y + b2.y)};
  if (dist(p1, p2) < 1e-9) return false;

  auto nearest_to_line = [&](const DigitalCurve& c) -> std::optional<RealPoint> {
    double best = 1e300;
    RealPoint bp{};
    for (const auto& px : c.points) {
      const double d = point_line_distance(p1, p2, to_real(px));
      if (d < best) {
        best = d;
        bp = to_real(px);
      }
    }
    if (best > 1.0) return std::nullopt;  // line misses the contour
    return bp;
  };
  const auto q1 = nearest_to_line(c1.curve), q2 = nearest_to_line(c2.curve);
  if (!q1 || !q2) return false;

  const double lhs = dist(*q1, *q2);
  const double rhs = dist(p1, *q1) + dist(p1, p2) + dist(p2, *q2);
  return std::abs(lhs - rhs) <= tol;
}

VoteResult vote_centers(const SmoothContour& contour, int sets, int bin_size, int width,
                        int height, double deb_radius, std::mt19937_64& rng) {
  VoteResult out;
  const size_t n = contour.curve.size();
  if (n < 9) return out;
  const size_t third = n / 3;

  for (int s = 0; s < sets; ++s) {
    const size_t i1 = draw(rng, third);
    const size_t i2 = third + draw(rng, third);
    const size_t i3 = 2 * third + draw(rng, n - 2 * third);
    try {
      const auto t1 = deb_tangent(contour.curve, i1, deb_radius);
      const auto t2 = deb_tangent(contour.curve, i2, deb_radius);
      const auto t3 = deb_tangent(contour.curve, i3, deb_radius);
      const RealPoint c =
          yuen_center(to_real(contour.curve[i1]), to_real(contour.curve[i2]),
                      to_real(contour.curve[i3]), t1.slope_angle, t2.slope_angle, t3.slope_angle);
      ++out.valid_sets;
      if (c.x >= 0 && c.x < width && c.y >= 0 && c.y < height) {
        const int col = int(c.x) / bin_size;
        const int row = int(c.y) / bin_size;
        ++out.per_bin[{row, col}];
      }
    } catch (const std::exception&) {
      // degenerate set: skipped, not counted in S_e
    }
  }
  return out;
}

double relationship_score(int s_eb, int s_e, int s) {
  if (s <= 0 || s_eb < 0 || s_eb > s_e || s_e > s)
    throw std::invalid_argument("relationship_score: need 0 <= S_eb <= S_e <= S, S > 0");
  if (s_e == 0) return 0.0;
  const double r1 = (double(s_eb) / s_e) * std::exp(double(s_eb) / s_e - 1.0);
  const double r2 = (double(s_e) / s) * std::exp(2.0 * (double(s_e) / s - 1.0));
  return s_eb * r1 * r2;
}

std::optional<EllipticHypothesis> group_and_fit(const CenterBin& bin,
                                                const std::vector<SmoothContour>& contours,
                                                const DetectParams& params) {
  // rank voters by score, descending; ties by contour id
  std::vector<std::pair<double, size_t>> ranked;
  for (const auto& [cid, v] : bin.voters) ranked.push_back({v.second, cid});
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  if (ranked.empty()) return std::nullopt;

  std::vector<size_t> group{ranked[0].second};
  const SmoothContour& top = contours[ranked[0].second];
  for (size_t k = 1; k < ranked.size(); ++k) {
    const SmoothContour& cand = contours[ranked[k].second];
    if (params.use_search_region && !search_region_accepts(top, cand)) continue;
    if (params.use_convexity && !associated_convexity_ok(top, cand, params.convexity_tol)) continue;
    group.push_back(ranked[k].second);
  }

  const RealPoint bin_center{(bin.col + 0.5) * params.bin_size, (bin.row + 0.5) * params.bin_size};
  while (!group.empty()) {
    std::vector<PixelPoint> pts;
    for (size_t cid : group)
      pts.insert(pts.end(), contours[cid].curve.points.begin(), contours[cid].curve.points.end());
    const FitResult fit = nsaf(pts);
    if (fit.ok() && fit.residual <= params.eps_ls &&
        ellipse_implicit(*fit.ellipse, bin_center) < 0.0) {
      EllipticHypothesis h;
      h.ellipse = *fit.ellipse;
      h.group = group;
      h.bin_row = bin.row;
      h.bin_col = bin.col;
      h.ls_residual = fit.residual;
      return h;
    }
    group.pop_back();  // drop the weakest contour and retry
  }
  return std::nullopt;
}

double overlap_ratio(const EllipseGeometric& e1, const EllipseGeometric& e2) {
  auto extent = [](const EllipseGeometric& e, double& ex, double& ey) {
    const double c = std::cos(e.theta_c), s = std::sin(e.theta_c);
    ex = std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s);
    ey = std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c);
  };
  double ex1, ey1, ex2, ey2;
  extent(e1, ex1, ey1);
  extent(e2, ex2, ey2);
  const int x0 = int(std::floor(std::min(e1.xc - ex1, e2.xc - ex2)));
  const int x1 = int(std::ceil(std::max(e1.xc + ex1, e2.xc + ex2)));
  const int y0 = int(std::floor(std::min(e1.yc - ey1, e2.yc - ey2)));
  const int y1 = int(std::ceil(std::max(e1.yc + ey1, e2.yc + ey2)));

  long both = 0, either = 0;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const RealPoint p{double(x), double(y)};
      const bool in1 = ellipse_implicit(e1, p) <= 0.0;
      const bool in2 = ellipse_implicit(e2, p) <= 0.0;
      either += in1 || in2;
      both += in1 && in2;
    }
  if (either == 0) return 0.0;
  return double(both) / double(either);  // = 1 - XOR/OR
}

namespace {

// cheap upper-bound prefilter: near-identical ellipses have near-identical
// bounding boxes
double bbox_jaccard(const EllipseGeometric& a, const EllipseGeometric& b) {
  auto box = [](const EllipseGeometric& e, double& x0, double& x1, double& y0, double& y1) {
    const double c = std::cos(e.theta_c), s = std::sin(e.theta_c);
    const double ex = std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s);
    const double ey = std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c);
    x0 = e.xc - ex;
    x1 = e.xc + ex;
    y0 = e.yc - ey;
    y1 = e.yc + ey;
  };
  double ax0, ax1, ay0, ay1, bx0, bx1, by0, by1;
  box(a, ax0, ax1, ay0, ay1);
  box(b, bx0, bx1, by0, by1);
  const double ix = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
  const double iy = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
  const double inter = ix * iy;
  const double uni = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

}  // namespace

std::vector<EllipticHypothesis> merge_similar(std::vector<EllipticHypothesis> hyps, double d0) {
  const size_t n = hyps.size();
  std::vector<size_t> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<size_t(size_t)> find = [&](size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (bbox_jaccard(hyps[i].ellipse, hyps[j].ellipse) < 0.5) continue;
      if (overlap_ratio(hyps[i].ellipse, hyps[j].ellipse) > d0) parent[find(i)] = find(j);
    }
  std::map<size_t, size_t> best;  // cluster root -> index of max saliency_c
  for (size_t i = 0; i < n; ++i) {
    const size_t r = find(i);
    auto it = best.find(r);
    if (it == best.end() || hyps[i].saliency_c > hyps[it->second].saliency_c) best[r] = i;
  }
  std::vector<EllipticHypothesis> out;
  for (size_t i = 0; i < n; ++i)
    if (best[find(i)] == i) out.push_back(std::move(hyps[i]));
  return out;
}

namespace {

double subtended_angle(const EllipseGeometric& e, const DigitalCurve& c) {
  const RealPoint ctr{e.xc, e.yc};
  auto ang = [&](PixelPoint p) { return std::atan2(p.y - ctr.y, p.x - ctr.x); };
  const double a1 = ang(c.points.front());
  const double a2 = ang(c.points.back());
  const double am = ang(c[c.size() / 2]);
  auto ccw = [](double from, double to) {
    double d = std::fmod(to - from, 2 * kPi);
    if (d < 0) d += 2 * kPi;
    return d;
  };
  const double sweep = ccw(a1, a2);
  return ccw(a1, am) <= sweep ? sweep : 2 * kPi - sweep;
}

// forward direction hint at a contour end: from a pixel a few steps inside
// toward the endpoint (for "leaving") -- callers flip as needed
RealPoint end_direction(const SmoothContour& sc, bool at_front, double deb_tangent_angle) {
  const auto& pts = sc.curve.points;
  const size_t k = std::min<size_t>(4, pts.size() - 1);
  const RealPoint endp = to_real(at_front ? pts.front() : pts.back());
  const RealPoint inner = to_real(at_front ? pts[k] : pts[pts.size() - 1 - k]);
  const double hx = endp.x - inner.x, hy = endp.y - inner.y;  // inward->end
  double dx = std::cos(deb_tangent_angle), dy = std::sin(deb_tangent_angle);
  if (dx * hx + dy * hy < 0) {
    dx = -dx;
    dy = -dy;
  }
  return {dx, dy};
}

}  // namespace

void saliency_scores(EllipticHypothesis& h, const std::vector<SmoothContour>& contours,
                     const DetectParams& params) {
  const EllipseGeometric& e = h.ellipse;

  double total_angle = 0.0;
  size_t total_px = 0, aligned_px = 0;
  for (size_t cid : h.group) {
    const auto& sc = contours[cid];
    total_angle += subtended_angle(e, sc.curve);
    for (const auto& px : sc.curve.points) {
      ++total_px;
      if (geometric_distance(e, to_real(px)) < params.align_dist) ++aligned_px;
    }
  }
  h.saliency_c = std::min(1.0, total_angle / (2 * kPi));
  h.saliency_a = total_px ? double(aligned_px) / double(total_px) : 0.0;

  if (h.group.size() == 1) {
    h.saliency_phi = 1.0;
  } else {
    // order group contours by angular position of their midpoints
    std::vector<size_t> order = h.group;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
      const auto mi = contours[i].midpoint, mj = contours[j].midpoint;
      return std::atan2(mi.y - e.yc, mi.x - e.xc) < std::atan2(mj.y - e.yc, mj.x - e.xc);
    });
    double sum = 0.0;
    for (size_t k = 0; k + 1 < order.size(); ++k) {
      const auto& ci = contours[order[k]];
      const auto& cj = contours[order[k + 1]];
      // mutually nearest endpoints
      const RealPoint ends_i[2] = {to_real(ci.curve.points.front()), to_real(ci.curve.points.back())};
      const RealPoint ends_j[2] = {to_real(cj.curve.points.front()), to_real(cj.curve.points.back())};
      int bi = 0, bj = 0;
      double bestd = 1e300;
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
          if (dist(ends_i[u], ends_j[v]) < bestd) {
            bestd = dist(ends_i[u], ends_j[v]);
            bi = u;
            bj = v;
          }
      const double ti = bi == 0 ? ci.tangent_start : ci.tangent_end;
      const double tj = bj == 0 ? cj.tangent_start : cj.tangent_end;
      // theta_diff: obtuse angle between the two tangent lines; near-parallel
      // tangents (a smooth continuation) approach pi, perpendicular ones pi/2
      double acute = std::abs(ti - tj);
      while (acute > kPi / 2) acute = std::abs(acute - kPi);
      sum += (kPi - acute) / kPi;
    }
    h.saliency_phi = sum / double(h.group.size() - 1);
  }
  h.sigma_add = (h.saliency_a + h.saliency_c + h.saliency_phi) / 3.0;
  h.sigma_mul = h.saliency_a * h.saliency_c * h.saliency_phi;
}

std::vector<EllipticHypothesis> select_hypotheses(std::vector<EllipticHypothesis> hyps) {
  if (hyps.empty()) return hyps;
  double ac = 0, aa = 0, ap = 0, as = 0;
  for (const auto& h : hyps) {
    ac += h.saliency_c;
    aa += h.saliency_a;
    ap += h.saliency_phi;
    as += h.sigma_add;
  }
  const double n = double(hyps.size());
  ac /= n;
  aa /= n;
  ap /= n;
  as /= n;
  std::vector<EllipticHypothesis> out;
  for (auto& h : hyps)
    if (h.saliency_c >= ac && h.saliency_a >= aa && h.saliency_phi >= ap && h.sigma_add >= as)
      out.push_back(std::move(h));
  return out;
}

std::vector<SmoothContour> detect_contours(const Raster& edge_map, const DetectParams& params) {
  return extract_smooth_contours(extract_contours(edge_map), params);
}

std::vector<EllipticHypothesis> detect(const Raster& edge_map, const DetectParams& params) {
  const std::vector<SmoothContour> smooth = detect_contours(edge_map, params);
  std::mt19937_64 rng(params.seed);

  std::map<std::pair<int, int>, CenterBin> bins;
  for (const auto& sc : smooth) {
    const VoteResult votes = vote_centers(sc, params.sets, params.bin_size, edge_map.width,
                                          edge_map.height, params.deb_radius, rng);
    for (const auto& [rc, s_eb] : votes.per_bin) {
      const double score = params.use_relationship_score
                               ? relationship_score(s_eb, votes.valid_sets, params.sets)
                               : double(s_eb);
      CenterBin& bin = bins[rc];
      bin.row = rc.first;
      bin.col = rc.second;
      bin.voters[sc.id] = {s_eb, score};
      bin.accum_relationship += score;
    }
  }

  // all non-empty bins, in descending accumulated score
  std::vector<const CenterBin*> ordered;
  for (const auto& [rc, bin] : bins) ordered.push_back(&bin);
  std::sort(ordered.begin(), ordered.end(), [](const CenterBin* a, const CenterBin* b) {
    if (a->accum_relationship != b->accum_relationship)
      return a->accum_relationship > b->accum_relationship;
    return std::pair(a->row, a->col) < std::pair(b->row, b->col);
  });

  std::vector<EllipticHypothesis> hyps;
  for (const CenterBin* bin : ordered) {
    auto h = group_and_fit(*bin, smooth, params);
    if (h) hyps.push_back(std::move(*h));
  }
  for (auto& h : hyps) saliency_scores(h, smooth, params);
  hyps = merge_similar(std::move(hyps), params.merge_overlap);
  return select_hypotheses(std::move(hyps));
}

}  // namespace dgeom
