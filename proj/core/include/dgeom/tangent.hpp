#pragma once

#include "dgeom/curve.hpp"

#include <optional>
#include <utility>

namespace dgeom {

struct TangentEstimate {
  double slope_angle = 0.0;  // in (-pi/2, pi/2]
  PixelPoint anchor;
  PixelPoint p1;
  PixelPoint p2;
  size_t i1 = 0;  // curve indices of p1/p2
  size_t i2 = 0;
  double radius_used = 0.0;
};

/// Conic r(1 - e cos theta) = a e with one focus at the origin (a is the
/// focal parameter). e == 0 is treated as a circle of radius a.
struct ConicSpec {
  double e = 0.0;
  double a = 1.0;
};

struct DebBounds {
  double analytic = 0.0;  // radians
  double digital = 0.0;
  double total = 0.0;
};

/// Slope of the chord between the first pixels reached, walking from `index`
/// in both directions, whose distance from the anchor is within 1/sqrt(2) of
/// R. Closed curves wrap; open curves throw std::runtime_error
/// ("insufficient arc") when an end is reached first.
TangentEstimate deb_tangent(const DigitalCurve& curve, size_t index, double R);

/// Digitization part of the tangent error bound: the truncated-series bound
/// evaluated at chord length s and chord angle phi, maximized over all sign
/// combinations.
double deb_digital_bound(double s, double phi);

/// Analytic + digitization error bound of the chord tangent at theta0.
/// The digital part uses the exact ring-crossing chord of the conic.
/// Throws std::domain_error when D_max = (1 + 1/e)(R/a) >= 1.
DebBounds deb_bounds(const ConicSpec& c, double theta0, double R);

/// Control-parameter rule R = D_tol * rho_min * h.
double choose_R(double rho_min, double D_tol, double h = 1.0);

/// Ellipse center from three boundary points and their tangent angles.
/// Throws std::runtime_error ("yuen degenerate") on parallel tangents or
/// parallel midpoint-chord lines.
RealPoint yuen_center(RealPoint p1, RealPoint p2, RealPoint p3, double t1, double t2, double t3);

double center_error(RealPoint actual, RealPoint computed);

/// Point on the conic at polar angle theta (circle of radius a when e == 0).
RealPoint conic_point(const ConicSpec& c, double theta);

/// Angle (in (-pi/2, pi/2]) of the analytic tangent at theta.
double conic_slope_angle(const ConicSpec& c, double theta);

/// Exact intersections of the conic with the circle of radius R centered at
/// conic_point(theta0): parameters (theta1 < theta0 < theta2), by bisection.
std::optional<std::pair<double, double>> conic_ring_crossings(const ConicSpec& c, double theta0,
                                                              double R);

}  // namespace dgeom
