#pragma once

#include "dgeom/curve.hpp"
#include "dgeom/ellipse.hpp"
#include "dgeom/raster.hpp"

#include <iosfwd>
#include <vector>

namespace dgeom {

/// SVG overlay: edge pixels as dots plus fitted ellipses as outlines.
void write_svg_overlay(std::ostream& out, const Raster& edges,
                       const std::vector<EllipseGeometric>& ellipses);

}  // namespace dgeom
