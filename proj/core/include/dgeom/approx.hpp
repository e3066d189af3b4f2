#pragma once

#include "dgeom/curve.hpp"
#include "dgeom/metrics.hpp"

namespace dgeom {

enum class ApproxMethod {
  BreakPoints,
  Rdp,
  RdpMod,
  Pro,
  Masood,
  MasoodMod,
  Carmona,
  CarmonaMod,
};

const char* to_string(ApproxMethod m);

struct ApproxParams {
  double d_tol = 0.0;   // rdp / masood
  double eps0 = 0.0;    // pro
  double r_tol = 0.0;   // carmona
};

/// Dominant-point selection. `indices` are strictly increasing positions in
/// the source curve; open curves always keep both endpoints. On closed
/// curves the final segment wraps from indices.back() to indices.front().
struct PolyApprox {
  ApproxMethod method = ApproxMethod::BreakPoints;
  ApproxParams params;
  std::vector<size_t> indices;
  bool closed = false;
};

/// Comparisons against thresholds treat equality within this slack as
/// satisfied, keeping the recursions deterministic on exact-hit inputs.
inline constexpr double TOLER_EQ = 1e-12;

/// Chain-code break points; the resulting polygon has ISE exactly 0.
PolyApprox break_points(const DigitalCurve& curve);

/// Recursive max-deviation splitting with a fixed tolerance.
PolyApprox rdp(const DigitalCurve& curve, double d_tol);

/// RDP with the per-chord digitization bound d_dig(s, phi) as tolerance.
PolyApprox rdp_mod(const DigitalCurve& curve);

/// Splitting controlled by the precision/reliability goal
/// max(eps'_p, eps_r) <= eps0 on every segment (chord-based metrics).
PolyApprox pro(const DigitalCurve& curve, double eps0);

/// Break-point suppression minimizing ISE; stops when the max squared
/// deviation of the candidate polygon would exceed d_tol (default 0.9).
PolyApprox masood(const DigitalCurve& curve, double d_tol = 0.9);

/// Masood with max-deviation local optimization and the digitization bound
/// of the bridging segment as the stopping rule. No user parameter.
PolyApprox masood_mod(const DigitalCurve& curve);

/// Iterative deletion with growing internal tolerance (0.5, 1.0, ...);
/// stops when r_i = max(deleted l_n)/max(d_n) drops below r_tol.
PolyApprox carmona(const DigitalCurve& curve, double r_tol);

/// Carmona stopping at the first iteration where a segment's max deviation
/// exceeds its digitization bound. No user parameter.
PolyApprox carmona_mod(const DigitalCurve& curve);

}  // namespace dgeom
