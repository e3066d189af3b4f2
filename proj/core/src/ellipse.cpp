#include "dgeom/ellipse.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace dgeom {

namespace {
constexpr double kPi = 3.141592653589793;

double wrap_theta(double th) {
  th = std::fmod(th, kPi);
  if (th < 0) th += kPi;
  return th;
}
}  // namespace

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::NonElliptic: return "non_elliptic";
    case RejectReason::Degenerate: return "degenerate";
    case RejectReason::TooFewPoints: return "too_few_points";
  }
  return "?";
}

RealPoint ellipse_point(const EllipseGeometric& E, double t) {
  const double c = std::cos(E.theta_c), s = std::sin(E.theta_c);
  const double u = E.a * std::cos(t), v = E.b * std::sin(t);
  return {E.xc + u * c - v * s, E.yc + u * s + v * c};
}

double ellipse_implicit(const EllipseGeometric& E, RealPoint p) {
  const double c = std::cos(E.theta_c), s = std::sin(E.theta_c);
  const double dx = p.x - E.xc, dy = p.y - E.yc;
  const double u = dx * c + dy * s, v = -dx * s + dy * c;
  return (u / E.a) * (u / E.a) + (v / E.b) * (v / E.b) - 1.0;
}

ConicCoefficients geometric_to_conic(const EllipseGeometric& E) {
  // alpha (x-xc)^2 + beta (y-yc)^2 + gamma (x-xc)(y-yc) = a^2 b^2
  const double c2 = std::cos(2 * E.theta_c), s2 = std::sin(2 * E.theta_c);
  const double A2 = E.a * E.a, B2 = E.b * E.b;
  const double al = 0.5 * ((A2 + B2) - (A2 - B2) * c2);
  const double be = 0.5 * ((A2 + B2) + (A2 - B2) * c2);
  const double ga = -(A2 - B2) * s2;
  ConicCoefficients k;
  k.a = al;
  k.b = ga;
  k.c = be;
  k.d = -(2 * al * E.xc + ga * E.yc);
  k.f = -(2 * be * E.yc + ga * E.xc);
  k.g = al * E.xc * E.xc + be * E.yc * E.yc + ga * E.xc * E.yc - A2 * B2;
  return k;
}

std::optional<EllipseGeometric> conic_to_geometric(const ConicCoefficients& k_in) {
  // normalize the overall sign so the quadratic form is positive definite
  ConicCoefficients k = k_in;
  if (k.a + k.c < 0) {
    k.a = -k.a;
    k.b = -k.b;
    k.c = -k.c;
    k.d = -k.d;
    k.f = -k.f;
    k.g = -k.g;
  }
  const double det = 4.0 * k.a * k.c - k.b * k.b;
  if (!(det > 0)) return std::nullopt;
  const double xc = (k.b * k.f - 2.0 * k.c * k.d) / det;
  const double yc = (k.b * k.d - 2.0 * k.a * k.f) / det;
  const double mu = k.a * xc * xc + k.b * xc * yc + k.c * yc * yc + k.d * xc + k.f * yc + k.g;
  // (X-Xc)^T Q (X-Xc) = -mu with Q = [[a, b/2], [b/2, c]]
  const double h = 0.5 * k.b;
  const double tr = k.a + k.c, gap = std::sqrt((k.a - k.c) * (k.a - k.c) + 4.0 * h * h);
  const double lmin = 0.5 * (tr - gap), lmax = 0.5 * (tr + gap);
  const double ra2 = -mu / lmin, rb2 = -mu / lmax;
  if (!(ra2 > 0) || !(rb2 > 0)) return std::nullopt;
  EllipseGeometric E;
  E.a = std::sqrt(ra2);
  E.b = std::sqrt(rb2);
  E.xc = xc;
  E.yc = yc;
  if (gap < 1e-12 * std::abs(tr)) {
    E.theta_c = 0.0;  // circle
  } else if (std::abs(h) < 1e-300) {
    E.theta_c = k.a <= k.c ? 0.0 : kPi / 2;
  } else {
    E.theta_c = wrap_theta(std::atan2(lmin - k.a, h));
  }
  if (!std::isfinite(E.a) || !std::isfinite(E.b) || !std::isfinite(E.xc) || !std::isfinite(E.yc))
    return std::nullopt;
  return E;
}

double geometric_distance(const EllipseGeometric& E, RealPoint p) {
  auto d = [&](double t) { return dist(ellipse_point(E, t), p); };
  const int n = 720;
  double best = d(0.0);
  int besti = 0;
  for (int i = 1; i < n; ++i) {
    const double v = d(2 * kPi * i / n);
    if (v < best) {
      best = v;
      besti = i;
    }
  }
  double lo = 2 * kPi * (besti - 1) / n, hi = 2 * kPi * (besti + 1) / n;
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = d(x1), f2 = d(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = d(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = d(x2);
    }
  }
  return std::min({best, f1, f2});
}

PhiVector phi_forward(const EllipseGeometric& E) {
  const double c2 = std::cos(2 * E.theta_c), s2 = std::sin(2 * E.theta_c);
  const double A2 = E.a * E.a, B2 = E.b * E.b;
  const double al = 0.5 * ((A2 + B2) - (A2 - B2) * c2);
  const double be = 0.5 * ((A2 + B2) + (A2 - B2) * c2);
  const double ga = -(A2 - B2) * s2;
  PhiVector p;
  p.phi1 = al / be;
  p.phi2 = ga / be;
  p.phi3 = 2.0 * p.phi1 * E.xc + p.phi2 * E.yc;
  p.phi4 = 2.0 * E.yc + p.phi2 * E.xc;
  p.phi5 = p.phi1 * E.xc * E.xc + E.yc * E.yc + p.phi2 * E.xc * E.yc - A2 * B2 / be;
  return p;
}

std::optional<EllipseGeometric> phi_inverse(const PhiVector& p) {
  if (!(p.phi1 > 0)) return std::nullopt;  // E1
  const double q = p.phi2 * p.phi2 - 4.0 * p.phi1;
  if (!(q < 0)) return std::nullopt;
  const double xc = (p.phi2 * p.phi4 - 2.0 * p.phi3) / q;
  const double yc = (p.phi2 * p.phi3 - 2.0 * p.phi1 * p.phi4) / q;
  // k = a^2 b^2 / beta must be positive for real axes
  const double k = p.phi1 * xc * xc + yc * yc + p.phi2 * xc * yc - p.phi5;
  if (!(k > 0)) return std::nullopt;
  const double be = -4.0 * k / q;
  const double delta = std::hypot(1.0 - p.phi1, p.phi2);
  const double a2 = 0.5 * be * ((1.0 + p.phi1) + delta);
  const double b2 = 0.5 * be * ((1.0 + p.phi1) - delta);
  if (!(a2 > 0) || !(b2 > 0)) return std::nullopt;
  EllipseGeometric E;
  E.a = std::sqrt(a2);
  E.b = std::sqrt(b2);
  E.xc = xc;
  E.yc = yc;
  if (std::abs(p.phi2) < 1e-9 && std::abs(p.phi1 - 1.0) < 1e-9)
    E.theta_c = 0.0;  // circle convention
  else
    E.theta_c = wrap_theta(0.5 * std::atan2(-p.phi2, 1.0 - p.phi1));
  if (!std::isfinite(E.a) || !std::isfinite(E.xc) || !std::isfinite(E.yc)) return std::nullopt;
  return E;
}

namespace {

double mean_geometric_distance(const EllipseGeometric& E, std::span<const PixelPoint> pts) {
  double s = 0.0;
  for (const auto& p : pts) s += geometric_distance(E, to_real(p));
  return s / double(pts.size());
}

// Core of the constrained algebraic fit, on already-shifted coordinates.
FitResult fitzgibbon_core(const std::vector<RealPoint>& pts) {
  using Eigen::Matrix3d;
  using Eigen::MatrixXd;
  using Eigen::Vector3d;
  const size_t n = pts.size();

  MatrixXd D(n, 6);
  for (size_t i = 0; i < n; ++i) {
    const double x = pts[i].x, y = pts[i].y;
    D.row(Eigen::Index(i)) << x * x, x * y, y * y, x, y, 1.0;
  }
  const MatrixXd S = D.transpose() * D;
  const Matrix3d S1 = S.block<3, 3>(0, 0);
  const Matrix3d S2 = S.block<3, 3>(0, 3);
  const Matrix3d S3 = S.block<3, 3>(3, 3);

  FitResult out;
  const Eigen::FullPivLU<Matrix3d> lu(S3);
  if (!lu.isInvertible()) {
    out.rejected_reason = RejectReason::Degenerate;
    return out;
  }
  const Matrix3d T = -lu.solve(S2.transpose());
  const Matrix3d M = S1 + S2 * T;
  Matrix3d C1inv;
  C1inv << 0, 0, 0.5, 0, -1, 0, 0.5, 0, 0;
  const Matrix3d Mred = C1inv * M;

  const Eigen::EigenSolver<Matrix3d> es(Mred);
  int pick = -1;
  double pick_cond = 0.0;
  for (int j = 0; j < 3; ++j) {
    if (std::abs(es.eigenvalues()[j].imag()) > 1e-9 * (1.0 + std::abs(es.eigenvalues()[j].real())))
      continue;
    const Vector3d v = es.eigenvectors().col(j).real();
    const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);  // a1^T C1 a1
    if (cond > 0.0 && (pick < 0 || cond > pick_cond)) {
      pick = j;
      pick_cond = cond;
    }
  }
  if (pick < 0) {
    out.rejected_reason = RejectReason::Degenerate;
    return out;
  }
  const Vector3d a1 = es.eigenvectors().col(pick).real();
  const Vector3d a2 = T * a1;
  Eigen::Matrix<double, 6, 1> A;
  A << a1, a2;
  A.normalize();

  out.residual = (D * A).squaredNorm() / double(n);
  ConicCoefficients k{A(0), A(1), A(2), A(3), A(4), A(5)};
  if (!k.is_ellipse()) {
    out.rejected_reason = RejectReason::NonElliptic;
    return out;
  }
  auto E = conic_to_geometric(k);
  if (!E) {
    out.rejected_reason = RejectReason::NonElliptic;
    return out;
  }
  out.ellipse = *E;
  return out;
}

}  // namespace

FitResult fitzgibbon(std::span<const PixelPoint> points) {
  FitResult out;
  if (points.size() < 6) {
    out.rejected_reason = RejectReason::TooFewPoints;
    return out;
  }
  std::vector<RealPoint> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(to_real(p));
  out = fitzgibbon_core(pts);
  if (out.ok()) out.mean_distance = mean_geometric_distance(*out.ellipse, points);
  return out;
}

FitResult nsaf(std::span<const PixelPoint> points) {
  FitResult out;
  if (points.size() < 6) {
    out.rejected_reason = RejectReason::TooFewPoints;
    return out;
  }
  double mx = 0, my = 0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= double(points.size());
  my /= double(points.size());
  std::vector<RealPoint> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back({p.x - mx, p.y - my});
  out = fitzgibbon_core(pts);
  if (out.ok()) {
    out.ellipse->xc += mx;
    out.ellipse->yc += my;
    out.mean_distance = mean_geometric_distance(*out.ellipse, points);
  }
  return out;
}

FitResult ellifit(std::span<const PixelPoint> points) {
  using Eigen::Matrix;
  FitResult out;
  if (points.size() < 7) {
    out.rejected_reason = RejectReason::TooFewPoints;
    return out;
  }
  const size_t n = points.size();
  double mx = 0, my = 0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= double(n);
  my /= double(n);

  Eigen::MatrixXd X(n, 5);
  Eigen::VectorXd Y(n);
  for (size_t i = 0; i < n; ++i) {
    const double x = points[i].x - mx, y = points[i].y - my;
    X.row(Eigen::Index(i)) << -x * x, -x * y, x, y, -1.0;
    Y(Eigen::Index(i)) = y * y;
  }
  const Matrix<double, 5, 5> G = X.transpose() * X;
  const Eigen::FullPivLU<Matrix<double, 5, 5>> lu(G);
  if (!lu.isInvertible()) {
    out.rejected_reason = RejectReason::Degenerate;
    return out;
  }
  const Matrix<double, 5, 1> phi = lu.solve(X.transpose() * Y);
  out.residual = std::sqrt((Y - X * phi).squaredNorm() / double(n));

  auto E = phi_inverse({phi(0), phi(1), phi(2), phi(3), phi(4)});
  if (!E) {
    out.rejected_reason = RejectReason::NonElliptic;
    return out;
  }
  E->xc += mx;
  E->yc += my;
  out.ellipse = *E;
  out.mean_distance = mean_geometric_distance(*E, points);
  return out;
}

double scatter_condition_inf(std::span<const PixelPoint> points, bool translate) {
  double mx = 0, my = 0;
  if (translate) {
    for (const auto& p : points) {
      mx += p.x;
      my += p.y;
    }
    mx /= double(points.size());
    my /= double(points.size());
  }
  Eigen::MatrixXd D(points.size(), 6);
  for (size_t i = 0; i < points.size(); ++i) {
    const double x = points[i].x - mx, y = points[i].y - my;
    D.row(Eigen::Index(i)) << x * x, x * y, y * y, x, y, 1.0;
  }
  const Eigen::MatrixXd S = D.transpose() * D;
  // partial-pivot inverse: on near-singular input this still yields the
  // large-entry estimate the condition number needs (full-pivot LU would
  // declare rank deficiency and hand back a meaningless small inverse)
  const Eigen::MatrixXd Sinv = S.partialPivLu().solve(Eigen::MatrixXd::Identity(6, 6));
  auto inf_norm = [](const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); };
  return inf_norm(S) * inf_norm(Sinv);
}

}  // namespace dgeom
