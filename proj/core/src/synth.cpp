#include "dgeom/synth.hpp"

#include "dgeom/detect.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dgeom {

namespace {

constexpr double kPi = 3.141592653589793;

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Longest 8-connected run of an already-digitized pixel list.
DigitalCurve longest_run(const std::vector<PixelPoint>& px) {
  DigitalCurve best;
  size_t start = 0;
  for (size_t i = 1; i <= px.size(); ++i) {
    if (i == px.size() || chebyshev(px[i - 1], px[i]) > 1) {
      if (i - start > best.size())
        best.points.assign(px.begin() + start, px.begin() + i);
      start = i;
    }
  }
  return best;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < std::abs(n); ++i) r *= x;
  return n >= 0 ? r : 1.0 / r;
}

double signed_root(double x, int n) {
  if (n == 1) return x;
  if (n % 2 == 1) return std::copysign(std::pow(std::abs(x), 1.0 / n), x);
  if (x < 0) throw std::domain_error("gen_supercurve: negative base under even root");
  return std::pow(x, 1.0 / n);
}

}  // namespace

const char* to_string(SceneMode m) {
  return m == SceneMode::Occluded ? "occluded" : "overlapping";
}

DigitalCurve gen_conic_curve(const ConicCurveSpec& spec) {
  if (!(spec.e >= 0) || !(spec.l > 0)) throw std::invalid_argument("gen_conic_curve: need e >= 0, l > 0");
  auto valid = [&](double t) { return 1.0 - spec.e * std::cos(t) > 1e-3; };
  auto point = [&](double t) -> RealPoint {
    const double r = spec.l / (1.0 - spec.e * std::cos(t));
    return {r * std::cos(t) + spec.x0, r * std::sin(t) + spec.y0};
  };

  // parameter march with steps short enough that samples stay < 0.4 px apart
  std::vector<PixelPoint> px;
  double t = spec.theta_min;
  const double diag = std::hypot(spec.width, spec.height);
  while (t <= spec.theta_max) {
    if (valid(t)) {
      const RealPoint p = point(t);
      const double rx = p.x - spec.x0, ry = p.y - spec.y0;
      if (std::hypot(rx, ry) < 2.0 * diag) {
        const PixelPoint q = digitize(p);
        if (q.x >= 0 && q.x < spec.width && q.y >= 0 && q.y < spec.height)
          if (px.empty() || !(px.back() == q)) px.push_back(q);
      }
    }
    // local speed |dP/dt|, from r and dr/dt
    double speed = 1.0;
    if (valid(t)) {
      const double k = 1.0 - spec.e * std::cos(t);
      const double r = spec.l / k;
      const double dr = -spec.l * spec.e * std::sin(t) / (k * k);
      speed = std::hypot(r, dr);
    }
    t += std::min(0.01, 0.3 / std::max(1.0, speed));
  }
  DigitalCurve out = longest_run(px);
  thin_chain(out.points);
  if (out.size() < 2) throw std::runtime_error("gen_conic_curve: empty after clipping");
  return out;
}

DigitalCurve gen_ellipse_arc(const EllipseGeometric& E, double theta1, double dtheta) {
  if (!(dtheta > 0) || dtheta > 2 * kPi + 1e-12)
    throw std::invalid_argument("gen_ellipse_arc: dtheta in (0, 2*pi]");
  const bool full = dtheta >= 2 * kPi - 1e-12;
  const double step = 0.3 / std::max(1.0, std::max(E.a, E.b));
  std::vector<PixelPoint> px;
  for (double t = theta1; t <= theta1 + dtheta + 1e-12; t += step) {
    const PixelPoint q = digitize(ellipse_point(E, t));
    if (px.empty() || !(px.back() == q)) px.push_back(q);
  }
  DigitalCurve out;
  out.points = std::move(px);
  dedupe_chain(out.points);
  if (full) {
    while (out.points.size() > 1 && out.points.back() == out.points.front()) out.points.pop_back();
    thin_chain(out.points, true);
    out.closed = out.points.size() >= 4 && chebyshev(out.points.front(), out.points.back()) == 1;
  } else {
    thin_chain(out.points);
  }
  return out;
}

std::vector<RealPoint> gen_supercurve(const SupercurveParams& p) {
  std::vector<RealPoint> out;
  out.reserve(1001);
  for (int k = 0; k <= 1000; ++k) {
    const double t = k * kPi / 1000.0;
    const double base = ipow(std::cos(p.m * t / 4.0), p.n2) + ipow(std::sin(p.m * t / 4.0), p.n3);
    const double r = p.a * signed_root(base, p.n1);
    out.push_back({r * std::cos(t + p.theta0) + p.x0, r * std::sin(t + p.theta0) + p.y0});
  }
  return out;
}

DigitalCurve gen_nonconic(const NonConicParams& p) {
  if (!(p.r_out > 0) || !(p.b > 0) || !(p.b < 1) || p.n < 1)
    throw std::invalid_argument("gen_nonconic: need r_out > 0, 0 < b < 1, n >= 1");
  const double step = 0.3 / (p.r_out * (1.0 + p.b * p.n));
  std::vector<PixelPoint> px;
  for (double t = 0.0; t < 2 * kPi; t += step) {
    const double r = p.r_out * (1.0 - p.b * std::sin(p.n * t)) / (1.0 + p.b);
    const PixelPoint q = digitize({r * std::cos(t) + p.x0, r * std::sin(t) + p.y0});
    if (px.empty() || !(px.back() == q)) px.push_back(q);
  }
  DigitalCurve out;
  out.points = std::move(px);
  dedupe_chain(out.points);
  while (out.points.size() > 1 && out.points.back() == out.points.front()) out.points.pop_back();
  thin_chain(out.points, true);
  out.closed = true;
  return out;
}

namespace {

bool ellipses_overlap(const EllipseGeometric& a, const EllipseGeometric& b) {
  if (ellipse_implicit(b, {a.xc, a.yc}) <= 0 || ellipse_implicit(a, {b.xc, b.yc}) <= 0) return true;
  for (int k = 0; k < 256; ++k) {
    const double t = 2 * kPi * k / 256;
    if (ellipse_implicit(b, ellipse_point(a, t)) < 0) return true;
    if (ellipse_implicit(a, ellipse_point(b, t)) < 0) return true;
  }
  return false;
}

bool contained_in_image(const EllipseGeometric& e, int w, int h) {
  const double c = std::cos(e.theta_c), s = std::sin(e.theta_c);
  const double ex = std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s);
  const double ey = std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c);
  return e.xc - ex >= 1.0 && e.xc + ex <= w - 2.0 && e.yc - ey >= 1.0 && e.yc + ey <= h - 2.0;
}

}  // namespace

std::pair<Raster, SceneTruth> gen_scene(int alpha, SceneMode mode, uint64_t seed) {
  if (alpha < 1) throw std::invalid_argument("gen_scene: alpha >= 1");
  const int W = 300, H = 300;
  const double ax_lo = 10.0, ax_hi = 300.0 / std::sqrt(2.0);
  std::mt19937_64 rng(seed);

  SceneTruth truth;
  truth.width = W;
  truth.height = H;
  truth.mode = mode;
  auto draw_contained = [&]() {
    for (int tries = 0; tries < 20000; ++tries) {
      EllipseGeometric e;
      e.xc = uniform(rng, 0, W);
      e.yc = uniform(rng, 0, H);
      double r1 = uniform(rng, ax_lo, ax_hi), r2 = uniform(rng, ax_lo, ax_hi);
      e.a = std::max(r1, r2);
      e.b = std::min(r1, r2);
      e.theta_c = uniform(rng, 0, kPi);
      if (contained_in_image(e, W, H)) return e;
    }
    throw std::runtime_error("gen_scene: sampling failed");
  };
  for (int i = 0; i < alpha; ++i) truth.ellipses.push_back(draw_contained());
  // repair pass: every ellipse must overlap at least one other
  if (alpha > 1) {
    for (int rounds = 0; rounds < 20000; ++rounds) {
      bool all_ok = true;
      for (size_t i = 0; i < truth.ellipses.size(); ++i) {
        bool overlaps = false;
        for (size_t j = 0; j < truth.ellipses.size() && !overlaps; ++j)
          if (j != i) overlaps = ellipses_overlap(truth.ellipses[i], truth.ellipses[j]);
        if (!overlaps) {
          truth.ellipses[i] = draw_contained();
          all_ok = false;
          break;
        }
      }
      if (all_ok) break;
      if (rounds == 19999) throw std::runtime_error("gen_scene: sampling failed");
    }
  }

  // opaque stacking: later-drawn ellipses sit in front, so a boundary pixel
  // is hidden only when it falls strictly inside an ellipse drawn later
  Raster raster(W, H, 0);
  for (size_t i = 0; i < truth.ellipses.size(); ++i) {
    const DigitalCurve boundary = gen_ellipse_arc(truth.ellipses[i], 0.0, 2 * kPi);
    for (const auto& px : boundary.points) {
      if (!raster.inside(px.x, px.y)) continue;
      bool hidden = false;
      if (mode == SceneMode::Occluded) {
        for (size_t j = i + 1; j < truth.ellipses.size() && !hidden; ++j)
          if (ellipse_implicit(truth.ellipses[j], to_real(px)) < 0.0) hidden = true;
      }
      if (!hidden) raster.at(px.x, px.y) = 255;
    }
  }
  return {std::move(raster), std::move(truth)};
}

EvalResult evaluate(const std::vector<EllipseGeometric>& hyps, const SceneTruth& truth,
                    double overlap_thresh) {
  if (!(overlap_thresh > 0) || overlap_thresh > 1)
    throw std::invalid_argument("evaluate: overlap_thresh in (0, 1]");
  EvalResult r;
  r.total_hyp = hyps.size();
  r.total_truth = truth.ellipses.size();

  struct Pair {
    double overlap;
    size_t hi, ti;
  };
  std::vector<Pair> pairs;
  for (size_t i = 0; i < hyps.size(); ++i)
    for (size_t j = 0; j < truth.ellipses.size(); ++j)
      pairs.push_back({overlap_ratio(hyps[i], truth.ellipses[j]), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    return std::pair(a.hi, a.ti) < std::pair(b.hi, b.ti);
  });
  std::vector<bool> husd(hyps.size(), false), tusd(truth.ellipses.size(), false);
  for (const auto& p : pairs) {
    if (husd[p.hi] || tusd[p.ti]) continue;
    husd[p.hi] = tusd[p.ti] = true;
    if (p.overlap >= overlap_thresh) ++r.tp;
  }
  r.precision = r.total_hyp ? double(r.tp) / double(r.total_hyp) : 0.0;
  r.recall = r.total_truth ? double(r.tp) / double(r.total_truth) : 0.0;
  r.f_measure =
      r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

}  // namespace dgeom
