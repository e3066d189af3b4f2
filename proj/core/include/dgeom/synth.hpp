#pragma once

#include "dgeom/curve.hpp"
#include "dgeom/ellipse.hpp"
#include "dgeom/raster.hpp"

#include <cstdint>
#include <utility>

namespace dgeom {

enum class SceneMode { Occluded, Overlapping };
const char* to_string(SceneMode m);

struct SceneTruth {
  int width = 300;
  int height = 300;
  SceneMode mode = SceneMode::Occluded;
  std::vector<EllipseGeometric> ellipses;
};

struct EvalResult {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  size_t tp = 0;
  size_t total_hyp = 0;
  size_t total_truth = 0;
};

/// Conic x = l cos(t)/(1 - e cos(t)) + x0, y likewise; digitized over
/// [theta_min, theta_max], clipped to the image region, chained (longest
/// 8-connected run). Throws when nothing survives clipping.
struct ConicCurveSpec {
  double l = 50.0;
  double e = 0.0;
  double x0 = 150.0;
  double y0 = 150.0;
  double theta_min = 0.0;
  double theta_max = 6.283185307179586;
  int width = 300;
  int height = 300;
};
DigitalCurve gen_conic_curve(const ConicCurveSpec& spec);

/// Digitized elliptic arc over [theta1, theta1 + dtheta]; closed when the
/// arc spans the full 2*pi.
DigitalCurve gen_ellipse_arc(const EllipseGeometric& E, double theta1, double dtheta);

/// Non-digitized supercurve r = a(cos(m t/4)^n2 + sin(m t/4)^n3)^(1/n1),
/// t = p*pi/1000 for p = 0..1000 (odd n1 takes the sign-preserving root).
struct SupercurveParams {
  double a = 100.0;
  int m = 9;
  int n1 = 9;
  int n2 = 14;
  int n3 = 11;
  double theta0 = 0.0;
  double x0 = 90.0;
  double y0 = 20.0;
};
std::vector<RealPoint> gen_supercurve(const SupercurveParams& p);

/// Digitized closed curve r = r_out (1 - b sin(n t))/(1 + b); n >= 1,
/// 0 < b < 1.
struct NonConicParams {
  double r_out = 100.0;
  double b = 0.5;
  int n = 3;
  double x0 = 150.0;
  double y0 = 150.0;
};
DigitalCurve gen_nonconic(const NonConicParams& p);

/// Random scene of `alpha` ellipses in a 300x300 raster: every ellipse fully
/// inside the image and (for alpha > 1) overlapping at least one other.
/// Occluded mode removes boundary pixels interior to another ellipse.
std::pair<Raster, SceneTruth> gen_scene(int alpha, SceneMode mode, uint64_t seed);

/// Greedy one-to-one matching by descending overlap; a pair with overlap >=
/// overlap_thresh is a true positive.
EvalResult evaluate(const std::vector<EllipseGeometric>& hyps, const SceneTruth& truth,
                    double overlap_thresh);

}  // namespace dgeom
