#include "dgeom/svg.hpp"

#include "dgeom/json_io.hpp"

#include <ostream>

namespace dgeom {

void write_svg_overlay(std::ostream& out, const Raster& edges,
                       const std::vector<EllipseGeometric>& ellipses) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << edges.width << "\" height=\""
      << edges.height << "\" viewBox=\"0 0 " << edges.width << " " << edges.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g fill=\"black\">\n";
  for (int y = 0; y < edges.height; ++y)
    for (int x = 0; x < edges.width; ++x)
      if (edges.at(x, y) > 0)
        out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"1\" height=\"1\"/>\n";
  out << "</g>\n";
  for (const auto& e : ellipses) {
    out << "<ellipse cx=\"0\" cy=\"0\" rx=\"" << format_double(e.a) << "\" ry=\""
        << format_double(e.b) << "\" transform=\"translate(" << format_double(e.xc) << ","
        << format_double(e.yc) << ") rotate(" << format_double(e.theta_c * 180.0 / 3.141592653589793)
        << ")\" fill=\"none\" stroke=\"red\" stroke-width=\"1\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace dgeom
