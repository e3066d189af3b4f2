#pragma once

#include "dgeom/curve.hpp"

#include <optional>
#include <span>

namespace dgeom {

/// Geometric ellipse: semi-axes a >= b > 0, center (xc, yc), and theta_c in
/// [0, pi) the CCW angle of the semi-major axis with the x-axis.
struct EllipseGeometric {
  double a = 1.0;
  double b = 1.0;
  double theta_c = 0.0;
  double xc = 0.0;
  double yc = 0.0;
};

/// Coefficients of a x^2 + b xy + c y^2 + d x + f y + g = 0.
struct ConicCoefficients {
  double a = 0, b = 0, c = 0, d = 0, f = 0, g = 0;
  bool is_ellipse() const { return b * b - 4.0 * a * c < 0.0; }
};

/// Intermediate fitting variables of the unconstrained geometric fit:
/// y^2 = -phi1 x^2 - phi2 xy + phi3 x + phi4 y - phi5.
struct PhiVector {
  double phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0, phi5 = 0;
};

enum class RejectReason { NonElliptic, Degenerate, TooFewPoints };
const char* to_string(RejectReason r);

struct FitResult {
  std::optional<EllipseGeometric> ellipse;
  std::optional<RejectReason> rejected_reason;
  double mean_distance = 0.0;  // mean geometric distance of inputs from the ellipse
  double residual = 0.0;       // algebraic residual; see the fitters for the normalization
  bool ok() const { return ellipse.has_value(); }
};

/// Boundary point at parameter t.
RealPoint ellipse_point(const EllipseGeometric& E, double t);

/// (u/a)^2 + (v/b)^2 - 1 in the ellipse frame; negative strictly inside.
double ellipse_implicit(const EllipseGeometric& E, RealPoint p);

ConicCoefficients geometric_to_conic(const EllipseGeometric& E);
std::optional<EllipseGeometric> conic_to_geometric(const ConicCoefficients& c);

/// Distance from p to the ellipse boundary: min over 720 boundary samples
/// followed by golden-section refinement (error <= 1e-4 * max(a, b)).
double geometric_distance(const EllipseGeometric& E, RealPoint p);

PhiVector phi_forward(const EllipseGeometric& E);

/// Inverse of phi_forward; nullopt when the existence conditions fail
/// (phi1 <= 0, phi2^2 - 4 phi1 >= 0, or a non-positive radicand).
std::optional<EllipseGeometric> phi_inverse(const PhiVector& phi);

/// Direct algebraic fit via the constrained generalized eigenproblem
/// (block-reduced to a 3x3 standard eigenproblem). residual is
/// ||D A||_2^2 / N with ||A||_2 = 1.
FitResult fitzgibbon(std::span<const PixelPoint> points);

/// fitzgibbon on centroid-translated coordinates (numerically stable form).
FitResult nsaf(std::span<const PixelPoint> points);

/// Unconstrained geometric fit through the phi variables; requires N >= 7.
/// residual is sqrt(||Y - X phi||_2^2 / N) in centered coordinates.
FitResult ellifit(std::span<const PixelPoint> points);

/// Bauer-style infinity-norm condition number of the 6x6 scatter matrix
/// D^T D, optionally on centroid-translated coordinates.
double scatter_condition_inf(std::span<const PixelPoint> points, bool translate);

}  // namespace dgeom
