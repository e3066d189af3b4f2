#include "dgeom/metrics.hpp"

#include "dgeom/approx.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dgeom {

namespace {

struct Normal2x2 {
  double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0;
  size_t m = 0;
};

Normal2x2 accumulate(std::span<const PixelPoint> pts) {
  Normal2x2 n;
  for (const auto& p : pts) {
    const double x = p.x, y = p.y;
    n.sxx += x * x;
    n.sxy += x * y;
    n.syy += y * y;
    n.sx += x;
    n.sy += y;
  }
  n.m = pts.size();
  return n;
}

bool singular(const Normal2x2& n, double& det) {
  det = n.sxx * n.syy - n.sxy * n.sxy;
  return !(det > 1e-12 * std::max(1.0, n.sxx * n.syy));
}

}  // namespace

LineCoefficients lsq_line(std::span<const PixelPoint> points) {
  if (points.size() < 2) throw std::domain_error("lsq_line: need at least 2 points");
  const Normal2x2 n = accumulate(points);
  double det;
  if (singular(n, det))
    throw std::domain_error("lsq_line: line through origin unrepresentable");
  return {(n.syy * n.sx - n.sxy * n.sy) / det, (n.sxx * n.sy - n.sxy * n.sx) / det};
}

double hat_matrix_sum(std::span<const PixelPoint> points) {
  if (points.size() < 2) throw std::domain_error("hat_matrix_sum: need at least 2 points");
  const Normal2x2 n = accumulate(points);
  double det;
  if (singular(n, det)) throw std::domain_error("hat_matrix_sum: singular normal matrix");
  // sum(B) = v^T (X^T X)^{-1} v with v = X^T J
  return (n.syy * n.sx * n.sx - 2.0 * n.sxy * n.sx * n.sy + n.sxx * n.sy * n.sy) / det;
}

double precision_metric(const SegmentFit& fit) { return fit.residual_l2; }

double reliability_metric(const SegmentFit& fit) {
  if (!(fit.s_max > 0)) throw std::domain_error("reliability_metric: s_max must be positive");
  return fit.residual_l1 / fit.s_max;
}

namespace {

SegmentFit finish_fit(std::span<const PixelPoint> points, size_t first, size_t last,
                      LineCoefficients line, const std::vector<double>& devs) {
  SegmentFit f;
  f.first = first;
  f.last = last;
  f.line = line;
  double l1 = 0, l2 = 0, linf = 0;
  for (double d : devs) {
    l1 += d;
    l2 += d * d;
    linf = std::max(linf, d);
  }
  f.residual_l1 = l1;
  f.residual_l2 = std::sqrt(l2);
  f.residual_linf = linf;
  f.s_max = max_pairwise_distance(std::vector<PixelPoint>(points.begin() + first, points.begin() + last + 1), 0, last - first);
  return f;
}

LineCoefficients chord_coefficients(RealPoint p, RealPoint q) {
  // (y1-y2) x + (x2-x1) y = x2 y1 - x1 y2; translate by +(1,1) if through origin
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double shift = attempt == 0 ? 0.0 : 1.0;
    const RealPoint a{p.x + shift, p.y + shift}, b{q.x + shift, q.y + shift};
    const double c = b.x * a.y - a.x * b.y;
    if (std::abs(c) > 1e-12 * std::max(1.0, std::max(std::abs(a.x) + std::abs(a.y), std::abs(b.x) + std::abs(b.y))))
      return {(a.y - b.y) / c, (b.x - a.x) / c};
  }
  throw std::domain_error("chord_coefficients: degenerate chord");
}

}  // namespace

SegmentFit segment_fit_from_chord(std::span<const PixelPoint> points, size_t first, size_t last) {
  if (last <= first || last >= points.size())
    throw std::invalid_argument("segment_fit_from_chord: bad slice");
  const RealPoint a = to_real(points[first]), b = to_real(points[last]);
  if (a == b) throw std::invalid_argument("segment_fit_from_chord: coincident chord endpoints");
  std::vector<double> devs;
  devs.reserve(last - first + 1);
  for (size_t i = first; i <= last; ++i) devs.push_back(point_line_distance(a, b, to_real(points[i])));
  return finish_fit(points, first, last, chord_coefficients(a, b), devs);
}

SegmentFit segment_fit_lsq(std::span<const PixelPoint> points) {
  if (points.size() < 2) throw std::invalid_argument("segment_fit_lsq: need at least 2 points");
  LineCoefficients line{};
  std::vector<double> devs;
  devs.reserve(points.size());
  try {
    line = lsq_line(points);
    const double nn = line.norm();
    for (const auto& p : points) devs.push_back(std::abs(line.a * p.x + line.b * p.y - 1.0) / nn);
  } catch (const std::domain_error&) {
    // translate by +(1,1); distances are translation-invariant
    std::vector<PixelPoint> shifted(points.begin(), points.end());
    for (auto& p : shifted) { p.x += 1; p.y += 1; }
    line = lsq_line(shifted);
    const double nn = line.norm();
    for (const auto& p : shifted) devs.push_back(std::abs(line.a * p.x + line.b * p.y - 1.0) / nn);
  }
  return finish_fit(points, 0, points.size() - 1, line, devs);
}

MetricReport curve_metrics(const DigitalCurve& curve, const PolyApprox& approx) {
  if (approx.indices.size() < 2) throw std::invalid_argument("curve_metrics: need >= 2 dominant points");
  const auto& idx = approx.indices;
  const size_t nseg = idx.size() - 1 + (approx.closed ? 1 : 0);

  double prec_sum = 0, l1_sum = 0, smax_sum = 0, ise = 0, md = 0;
  for (size_t j = 0; j < nseg; ++j) {
    std::vector<PixelPoint> slice;
    if (j + 1 < idx.size()) {
      slice.assign(curve.points.begin() + idx[j], curve.points.begin() + idx[j + 1] + 1);
    } else {  // wrap segment of a closed curve
      slice.assign(curve.points.begin() + idx.back(), curve.points.end());
      slice.insert(slice.end(), curve.points.begin(), curve.points.begin() + idx.front() + 1);
    }
    if (slice.size() < 2 || slice.front() == slice.back()) continue;
    const SegmentFit fit = segment_fit_from_chord(slice, 0, slice.size() - 1);
    prec_sum += precision_metric(fit);
    l1_sum += fit.residual_l1;
    smax_sum += fit.s_max;
    ise += fit.residual_l2 * fit.residual_l2;
    md = std::max(md, fit.residual_linf);
  }

  MetricReport r;
  r.n_points = curve.size();
  r.n_dominant = idx.size();
  r.md = md;
  r.ise = ise;
  r.cr = double(r.n_points) / double(r.n_dominant);
  r.dr = 1.0 / r.cr;
  r.precision = prec_sum / double(nseg);
  r.reliability = smax_sum > 0 ? l1_sum / smax_sum : 0.0;
  if (ise > 0) {
    r.fom = r.cr / ise;
  } else {
    r.fom = 0.0;
    r.fom_infinite = true;
  }
  return r;
}

MetricReport aggregate_metrics(AggregateLevel level, const std::vector<MetricReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("aggregate_metrics: empty list");
  const double n = double(reports.size());
  MetricReport out;
  out.cr = 0.0;
  bool any_inf = false;
  for (const auto& r : reports) {
    out.md += r.md / n;
    out.ise += r.ise / n;
    out.cr += r.cr / n;
    out.fom += r.fom / n;
    out.reliability += r.reliability / n;
    out.n_points += r.n_points;
    out.n_dominant += r.n_dominant;
    any_inf = any_inf || r.fom_infinite;
    if (level == AggregateLevel::Image)
      out.precision = std::max(out.precision, r.precision);
    else
      out.precision += r.precision / n;
  }
  out.dr = 1.0 / out.cr;
  out.fom_infinite = any_inf;
  if (any_inf) out.fom = 0.0;
  return out;
}

}  // namespace dgeom
