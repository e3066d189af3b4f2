#pragma once

#include <optional>

namespace dgeom {

/// A continuous line segment summarized by its length s (pixels) and the
/// angle phi it makes with the x-axis. The digitization bounds need
/// s > sqrt(2) so that the geometric-series argument stays below 1.
struct SegmentGeometry {
  double s = 0.0;
  double phi = 0.0;
};

/// Upper bound (radians) on the slope error introduced by digitizing the
/// segment endpoints: max over the +/- sign of
///   atan{ (1/s) |sin phi +/- cos phi| (1 - t_max + t_max^2) },
/// t_max = (|cos phi| + |sin phi|)/s. Throws std::domain_error when
/// t_max >= 1 (segment too short for the bound).
double slope_error_bound(const SegmentGeometry& g);

/// Deviation bound d_dig = s * slope_error_bound (pixels).
double d_dig(const SegmentGeometry& g);

/// Returns d_dig when the bound applies (s > sqrt(2) and t_max < 1).
std::optional<double> d_dig_checked(const SegmentGeometry& g);

/// Digital-straight-segment bound, |sin phi| + |cos phi|.
double d_dss(double phi);

/// Inner-tangent bound, s * asin(sqrt(2)/s); requires s > sqrt(2).
double d_tan(double s);

}  // namespace dgeom
