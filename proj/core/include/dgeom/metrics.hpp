#pragma once

#include "dgeom/curve.hpp"

#include <span>

namespace dgeom {

/// Coefficients of a line written ax + by = 1.
struct LineCoefficients {
  double a = 0.0;
  double b = 0.0;
  double norm() const { return std::hypot(a, b); }
};

/// Per-segment fit record. The residual norms are geometric: each residue
/// term |a x_i + b y_i - 1| is divided by ||(a,b)||_2, so residual_l2 is the
/// L2 norm of the perpendicular deviations, residual_linf their maximum, and
/// residual_l1 their sum. This keeps the reliability metric unit-consistent
/// with the precision metric.
struct SegmentFit {
  size_t first = 0;  // inclusive indices into the source point sequence
  size_t last = 0;
  LineCoefficients line;
  double residual_l1 = 0.0;
  double residual_l2 = 0.0;
  double residual_linf = 0.0;
  double s_max = 0.0;
};

struct MetricReport {
  double md = 0.0;
  double ise = 0.0;
  double cr = 1.0;
  double dr = 1.0;
  double fom = 0.0;
  bool fom_infinite = false;  // ISE == 0; never serialized as a float infinity
  double precision = 0.0;
  double reliability = 0.0;
  size_t n_points = 0;
  size_t n_dominant = 0;
};

/// Least-squares solution of X [a b]^T = 1. Throws std::domain_error when the
/// 2x2 normal matrix is singular (e.g. points collinear through the origin);
/// callers fall back to the chord form.
LineCoefficients lsq_line(std::span<const PixelPoint> points);

/// Local fit quality, eps'_p = ||XA - J||_2 / ||A||_2.
double precision_metric(const SegmentFit& fit);

/// Global fit quality, eps_r: geometric L1 deviation sum over s_max.
double reliability_metric(const SegmentFit& fit);

/// Builds a fit of the chord through points[first] and points[last] over the
/// inclusive slice [first, last]. Coincident chord endpoints are rejected.
SegmentFit segment_fit_from_chord(std::span<const PixelPoint> points, size_t first, size_t last);

/// Builds a fit from lsq_line over the whole span (translating by +(1,1)
/// internally when the normal matrix is singular; deviations are
/// translation-invariant so the metrics are exact).
SegmentFit segment_fit_lsq(std::span<const PixelPoint> points);

/// Sum of all elements of the hat matrix B = X (X^T X)^{-1} X^T.
/// Always <= M (point count); equality iff x,y perfectly correlated.
double hat_matrix_sum(std::span<const PixelPoint> points);

struct PolyApprox;  // approx.hpp

/// Chord-based per-curve metrics of a polygonal approximation.
MetricReport curve_metrics(const DigitalCurve& curve, const PolyApprox& approx);

enum class AggregateLevel { Image, Dataset };

/// Image level: precision = max over curves, the rest are means.
/// Dataset level: every field is a mean over images.
MetricReport aggregate_metrics(AggregateLevel level, const std::vector<MetricReport>& reports);

}  // namespace dgeom
