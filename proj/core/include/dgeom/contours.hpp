#pragma once

#include "dgeom/curve.hpp"
#include "dgeom/raster.hpp"

namespace dgeom {

/// Derives non-branched edge contours from a binary edge map:
///  1. edge pixels with more than 2 edge neighbours (8-connectivity) are
///     removed (junction removal),
///  2. remaining pixels are traced into maximal 8-connected chains,
///  3. chains shorter than `min_length` pixels are discarded,
///  4. a chain whose endpoints are 8-adjacent is marked closed.
/// Open chains start at a degree-1 pixel; closed chains start at their
/// lexicographically smallest pixel and run counter-clockwise (positive
/// shoelace area in x/y coordinates).
std::vector<DigitalCurve> extract_contours(const Raster& edge_map, int min_length = 5);

}  // namespace dgeom
