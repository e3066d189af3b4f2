#include "dgeom/approx.hpp"

#include "dgeom/bounds.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace dgeom {

const char* to_string(ApproxMethod m) {
  switch (m) {
    case ApproxMethod::BreakPoints: return "break-points";
    case ApproxMethod::Rdp: return "rdp";
    case ApproxMethod::RdpMod: return "rdp-mod";
    case ApproxMethod::Pro: return "pro";
    case ApproxMethod::Masood: return "masood";
    case ApproxMethod::MasoodMod: return "masood-mod";
    case ApproxMethod::Carmona: return "carmona";
    case ApproxMethod::CarmonaMod: return "carmona-mod";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pixel access over virtual indices: closed curves are addressed modulo n so
// wrap-around slices use indices in [i, i + n].
struct Track {
  const std::vector<PixelPoint>* pts;
  size_t n;
  PixelPoint at(size_t vi) const { return (*pts)[vi % n]; }
  RealPoint rat(size_t vi) const { return to_real(at(vi)); }
};

double chord_dev(const Track& t, size_t u, size_t v, size_t i) {
  const RealPoint a = t.rat(u), b = t.rat(v);
  if (a == b) return dist(a, t.rat(i));
  return point_line_distance(a, b, t.rat(i));
}

struct DevScan {
  double maxdev = 0.0;
  size_t argmax = 0;
};

DevScan scan_devs(const Track& t, size_t u, size_t v) {
  DevScan s;
  s.argmax = u;
  for (size_t i = u + 1; i < v; ++i) {
    const double d = chord_dev(t, u, v, i);
    if (d > s.maxdev) {
      s.maxdev = d;
      s.argmax = i;
    }
  }
  return s;
}

double seg_ise(const Track& t, size_t u, size_t v) {
  double s = 0.0;
  for (size_t i = u + 1; i < v; ++i) {
    const double d = chord_dev(t, u, v, i);
    s += d * d;
  }
  return s;
}

double seg_maxdev(const Track& t, size_t u, size_t v) {
  double m = 0.0;
  for (size_t i = u + 1; i < v; ++i) m = std::max(m, chord_dev(t, u, v, i));
  return m;
}

std::optional<double> chord_dig_bound(const Track& t, size_t u, size_t v) {
  const RealPoint a = t.rat(u), b = t.rat(v);
  const double s = dist(a, b);
  if (s == 0.0) return std::nullopt;
  return d_dig_checked({s, std::atan2(b.y - a.y, b.x - a.x)});
}

// --- recursive splitters (RDP, RDP-mod, PRO) -------------------------------

enum class SplitRule { FixedTol, DigBound, ProGoal };

struct SplitConfig {
  SplitRule rule;
  double value = 0.0;  // d_tol or eps0
};

// Chord-based precision/reliability of the slice [u, v].
void chord_metrics(const Track& t, size_t u, size_t v, double& eps_p, double& eps_r) {
  double l1 = 0, l2 = 0;
  for (size_t i = u; i <= v; ++i) {
    const double d = chord_dev(t, u, v, i);
    l1 += d;
    l2 += d * d;
  }
  double smax2 = 0.0;
  for (size_t i = u; i <= v; ++i)
    for (size_t j = i + 1; j <= v; ++j) {
      const RealPoint p = t.rat(i), q = t.rat(j);
      const double dx = q.x - p.x, dy = q.y - p.y;
      smax2 = std::max(smax2, dx * dx + dy * dy);
    }
  eps_p = std::sqrt(l2);
  eps_r = smax2 > 0 ? l1 / std::sqrt(smax2) : 0.0;
}

void split_rec(const Track& t, size_t u, size_t v, const SplitConfig& cfg, std::vector<size_t>& out) {
  out.push_back(u);
  if (v - u < 2) return;
  const DevScan ds = scan_devs(t, u, v);

  bool accept = false;
  switch (cfg.rule) {
    case SplitRule::FixedTol:
      accept = ds.maxdev <= cfg.value + TOLER_EQ;
      break;
    case SplitRule::DigBound: {
      const auto bound = chord_dig_bound(t, u, v);
      accept = ds.maxdev <= (bound ? *bound : 0.0) + TOLER_EQ;
      break;
    }
    case SplitRule::ProGoal: {
      double eps_p, eps_r;
      chord_metrics(t, u, v, eps_p, eps_r);
      accept = eps_p <= cfg.value + TOLER_EQ && eps_r <= cfg.value + TOLER_EQ;
      break;
    }
  }
  if (accept) return;
  split_rec(t, u, ds.argmax, cfg, out);
  split_rec(t, ds.argmax, v, cfg, out);
}

PolyApprox run_split(const DigitalCurve& curve, ApproxMethod method, const SplitConfig& cfg,
                     ApproxParams params) {
  const size_t n = curve.size();
  if (n < 2) throw std::invalid_argument("approx: curve too short");
  const Track t{&curve.points, n};

  PolyApprox pa;
  pa.method = method;
  pa.params = params;
  pa.closed = curve.closed;
  if (n == 2) {
    pa.indices = {0, 1};
    return pa;
  }

  std::vector<size_t> vidx;
  if (!curve.closed) {
    split_rec(t, 0, n - 1, cfg, vidx);
    vidx.push_back(n - 1);
  } else {
    // seed with the two mutually farthest pixels, each arc processed as open
    size_t bi = 0, bj = 1;
    double best = -1.0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        const double d = dist(curve[i], curve[j]);
        if (d > best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    split_rec(t, bi, bj, cfg, vidx);
    split_rec(t, bj, bi + n, cfg, vidx);
  }
  for (auto& vi : vidx) vi %= n;
  std::sort(vidx.begin(), vidx.end());
  vidx.erase(std::unique(vidx.begin(), vidx.end()), vidx.end());
  pa.indices = std::move(vidx);
  return pa;
}

// --- break points -----------------------------------------------------------

bool direction_change(PixelPoint a, PixelPoint b, PixelPoint c) {
  const long d1x = b.x - a.x, d1y = b.y - a.y;
  const long d2x = c.x - b.x, d2y = c.y - b.y;
  return d1x * d2y - d1y * d2x != 0 || d1x * d2x + d1y * d2y <= 0;
}

std::vector<size_t> break_indices(const DigitalCurve& curve) {
  const size_t n = curve.size();
  std::vector<size_t> idx;
  if (!curve.closed) {
    idx.push_back(0);
    for (size_t i = 1; i + 1 < n; ++i)
      if (direction_change(curve[i - 1], curve[i], curve[i + 1])) idx.push_back(i);
    idx.push_back(n - 1);
  } else {
    for (size_t i = 0; i < n; ++i)
      if (direction_change(curve[(i + n - 1) % n], curve[i], curve[(i + 1) % n])) idx.push_back(i);
    if (idx.size() < 2) idx = {0, n / 2};
  }
  return idx;
}

// --- Masood / Carmona shared setup ------------------------------------------

// Dominant points as virtual indices. For closed curves the sequence is
// rotated so the anchor (break point with maximal deviation from the chord of
// its neighbours) is first, and the anchor reappears at the end as a fixed
// virtual duplicate; segments then cover the whole cycle.
std::vector<size_t> initial_dominants(const DigitalCurve& curve, const Track& t) {
  std::vector<size_t> br = break_indices(curve);
  if (!curve.closed) return br;
  const size_t k = br.size(), n = curve.size();
  size_t anchor_pos = 0;
  double best = -1.0;
  for (size_t p = 0; p < k; ++p) {
    const size_t prev = br[(p + k - 1) % k], cur = br[p], next = br[(p + 1) % k];
    const size_t vprev = prev, vcur = cur < prev ? cur + n : cur;
    size_t vnext = next;
    while (vnext < vcur) vnext += n;
    const double d = chord_dev(t, vprev, vnext, vcur);
    if (d > best) {
      best = d;
      anchor_pos = p;
    }
  }
  std::vector<size_t> out;
  out.reserve(k + 1);
  const size_t a = br[anchor_pos];
  for (size_t p = 0; p < k; ++p) {
    const size_t raw = br[(anchor_pos + p) % k];
    out.push_back(raw >= a ? raw : raw + n);
  }
  out.push_back(a + n);
  return out;
}

PolyApprox finalize(const DigitalCurve& curve, ApproxMethod method, ApproxParams params,
                    std::vector<size_t> vidx) {
  const size_t n = curve.size();
  for (auto& vi : vidx) vi %= n;
  std::sort(vidx.begin(), vidx.end());
  vidx.erase(std::unique(vidx.begin(), vidx.end()), vidx.end());
  PolyApprox pa;
  pa.method = method;
  pa.params = params;
  pa.closed = curve.closed;
  pa.indices = std::move(vidx);
  return pa;
}

// --- Masood -----------------------------------------------------------------

double window_cost(const Track& t, size_t lo, size_t mid, size_t hi, bool ise_mode) {
  if (ise_mode) return seg_ise(t, lo, mid) + seg_ise(t, mid, hi);
  return std::max(seg_maxdev(t, lo, mid), seg_maxdev(t, mid, hi));
}

struct AevResult {
  double aev = kInf;
  std::vector<size_t> opt;  // dominant set with position n removed
};

// Hypothesize deleting position n from I, locally re-optimizing neighbours
// while the improvement propagates. Windows keep the deleted point as a
// boundary, matching the published procedure.
AevResult compute_aev(const Track& t, const std::vector<size_t>& I, size_t n, bool ise_mode,
                      const std::vector<double>& segdev, const std::vector<double>& pre,
                      const std::vector<double>& suf) {
  std::vector<size_t> work = I;
  size_t lo_pos = n, hi_pos = n;

  auto optimize = [&](bool upstream) {
    for (size_t k = 1;; ++k) {
      const size_t pos = upstream ? n - k : n + k;
      if (pos == 0 || pos + 1 >= work.size()) break;
      if (upstream && pos >= n) break;
      const size_t lo = work[pos - 1], hi = work[pos + 1];
      if (hi - lo < 2) break;
      size_t best = work[pos];
      double bestcost = window_cost(t, lo, best, hi, ise_mode);
      for (size_t v = lo + 1; v < hi; ++v) {
        if (v == work[pos]) continue;
        const double c = window_cost(t, lo, v, hi, ise_mode);
        if (c + TOLER_EQ < bestcost) {
          bestcost = c;
          best = v;
        }
      }
      if (best == work[pos]) break;
      work[pos] = best;
      if (upstream) lo_pos = pos; else hi_pos = pos;
    }
  };
  optimize(true);
  optimize(false);

  const size_t a_pos = lo_pos - 1, b_pos = hi_pos + 1;  // fixed anchors of the changed span
  AevResult r;
  r.opt = work;
  r.opt.erase(r.opt.begin() + ptrdiff_t(n));

  if (ise_mode) {
    double before = 0.0, after = 0.0;
    for (size_t j = a_pos; j < b_pos; ++j) before += seg_ise(t, I[j], I[j + 1]);
    for (size_t j = a_pos; j + 1 < b_pos; ++j) after += seg_ise(t, r.opt[j], r.opt[j + 1]);
    r.aev = after - before;
  } else {
    double m = std::max(pre[a_pos], suf[b_pos]);
    for (size_t j = a_pos; j + 1 < b_pos; ++j) m = std::max(m, seg_maxdev(t, r.opt[j], r.opt[j + 1]));
    r.aev = m;
    (void)segdev;
  }
  return r;
}

PolyApprox masood_impl(const DigitalCurve& curve, bool mod, double d_tol) {
  const size_t n = curve.size();
  if (n < 2) throw std::invalid_argument("approx: curve too short");
  const Track t{&curve.points, n};
  ApproxParams params;
  if (!mod) params.d_tol = d_tol;
  const ApproxMethod method = mod ? ApproxMethod::MasoodMod : ApproxMethod::Masood;
  if (n == 2) return finalize(curve, method, params, {0, 1});

  std::vector<size_t> I = initial_dominants(curve, t);

  while (I.size() > 2) {
    const size_t K = I.size();
    if (!mod) {
      // termination checks the current polygon; a passing deletion is then
      // applied unconditionally (its deviation is only examined next round)
      double m = 0.0;
      for (size_t j = 0; j + 1 < K; ++j) m = std::max(m, seg_maxdev(t, I[j], I[j + 1]));
      if (m * m > d_tol) break;
    }
    std::vector<double> segdev, pre(K, 0.0), suf(K, 0.0);
    if (mod) {
      // pre[p]: max deviation over segments left of position p;
      // suf[p]: max over segments starting at or after position p
      segdev.resize(K - 1);
      for (size_t j = 0; j + 1 < K; ++j) segdev[j] = seg_maxdev(t, I[j], I[j + 1]);
      for (size_t j = 1; j < K; ++j) pre[j] = std::max(pre[j - 1], segdev[j - 1]);
      for (size_t p = K - 1; p-- > 0;) suf[p] = std::max(segdev[p], suf[p + 1]);
    }

    double best_aev = kInf;
    size_t best_n = 0;
    AevResult best;
    for (size_t pos = 1; pos + 1 < K; ++pos) {
      AevResult r = compute_aev(t, I, pos, !mod, segdev, pre, suf);
      if (r.aev < best_aev) {
        best_aev = r.aev;
        best_n = pos;
        best = std::move(r);
      }
    }
    if (best_n == 0) break;

    if (mod) {
      const auto bound = chord_dig_bound(t, I[best_n - 1], I[best_n + 1]);
      if (best_aev > (bound ? *bound : 0.0)) break;
    }
    I = std::move(best.opt);
  }
  return finalize(curve, method, params, std::move(I));
}

// --- Carmona ----------------------------------------------------------------

PolyApprox carmona_impl(const DigitalCurve& curve, bool mod, double r_tol) {
  const size_t n = curve.size();
  if (n < 2) throw std::invalid_argument("approx: curve too short");
  const Track t{&curve.points, n};
  ApproxParams params;
  if (!mod) params.r_tol = r_tol;
  const ApproxMethod method = mod ? ApproxMethod::CarmonaMod : ApproxMethod::Carmona;
  if (n == 2) return finalize(curve, method, params, {0, 1});

  std::vector<size_t> I = initial_dominants(curve, t);
  double dtol = 0.0;

  while (I.size() > 2) {
    dtol += 0.5;
    std::vector<double> deleted_l;
    for (bool removed = true; removed && I.size() > 2;) {
      removed = false;
      for (size_t pos = 1; pos + 1 < I.size(); ++pos) {
        const double dc = chord_dev(t, I[pos - 1], I[pos + 1], I[pos]);
        if (dc < dtol) {
          const double num = dist(t.rat(I[pos - 1]), t.rat(I[pos])) + dist(t.rat(I[pos]), t.rat(I[pos + 1]));
          const double den = dist(t.rat(I[pos - 1]), t.rat(I[pos + 1]));
          deleted_l.push_back(den > 0 ? num / den : kInf);
          I.erase(I.begin() + ptrdiff_t(pos));
          removed = true;
          break;  // restart: always the first qualifying point
        }
      }
    }

    if (mod) {
      bool stop = false;
      for (size_t j = 0; j + 1 < I.size() && !stop; ++j) {
        const double dn = seg_maxdev(t, I[j], I[j + 1]);
        const auto bound = chord_dig_bound(t, I[j], I[j + 1]);
        if (dn > (bound ? *bound : 0.0)) stop = true;
      }
      if (stop) break;
    } else {
      if (deleted_l.empty()) break;  // r_i = 0
      double maxd = 0.0;
      for (size_t j = 0; j + 1 < I.size(); ++j) maxd = std::max(maxd, seg_maxdev(t, I[j], I[j + 1]));
      const double ri = maxd > 0 ? *std::max_element(deleted_l.begin(), deleted_l.end()) / maxd : kInf;
      if (ri < r_tol) break;
    }
  }
  return finalize(curve, method, params, std::move(I));
}

}  // namespace

PolyApprox break_points(const DigitalCurve& curve) {
  if (curve.size() < 2) throw std::invalid_argument("approx: curve too short");
  PolyApprox pa;
  pa.method = ApproxMethod::BreakPoints;
  pa.closed = curve.closed;
  pa.indices = break_indices(curve);
  return pa;
}

PolyApprox rdp(const DigitalCurve& curve, double d_tol) {
  if (!(d_tol > 0)) throw std::invalid_argument("rdp: d_tol must be positive");
  ApproxParams p;
  p.d_tol = d_tol;
  return run_split(curve, ApproxMethod::Rdp, {SplitRule::FixedTol, d_tol}, p);
}

PolyApprox rdp_mod(const DigitalCurve& curve) {
  return run_split(curve, ApproxMethod::RdpMod, {SplitRule::DigBound, 0.0}, {});
}

PolyApprox pro(const DigitalCurve& curve, double eps0) {
  if (!(eps0 > 0)) throw std::invalid_argument("pro: eps0 must be positive");
  ApproxParams p;
  p.eps0 = eps0;
  return run_split(curve, ApproxMethod::Pro, {SplitRule::ProGoal, eps0}, p);
}

PolyApprox masood(const DigitalCurve& curve, double d_tol) {
  if (!(d_tol > 0)) throw std::invalid_argument("masood: d_tol must be positive");
  return masood_impl(curve, false, d_tol);
}

PolyApprox masood_mod(const DigitalCurve& curve) { return masood_impl(curve, true, 0.0); }

PolyApprox carmona(const DigitalCurve& curve, double r_tol) {
  if (!(r_tol > 0)) throw std::invalid_argument("carmona: r_tol must be positive");
  return carmona_impl(curve, false, r_tol);
}

PolyApprox carmona_mod(const DigitalCurve& curve) { return carmona_impl(curve, true, 0.0); }

}  // namespace dgeom
