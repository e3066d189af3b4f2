#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dgeom {

/// Single-channel 8-bit raster. Any value > 0 is an edge pixel.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // row-major

  Raster() = default;
  Raster(int w, int h, uint8_t fill = 0) : width(w), height(h), data(size_t(w) * h, fill) {}

  uint8_t& at(int x, int y) { return data[size_t(y) * width + x]; }
  uint8_t at(int x, int y) const { return data[size_t(y) * width + x]; }
  bool inside(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  bool edge(int x, int y) const { return inside(x, y) && at(x, y) > 0; }
};

/// Reads PBM (P1/P4) or PGM (P2/P5). PBM 1-bits and PGM values > 0 are edges.
Raster read_pnm(std::istream& in);
Raster read_pnm_file(const std::string& path);

/// Binary PGM (P5); edge pixels stored as 255.
void write_pgm(std::ostream& out, const Raster& r);
void write_pgm_file(const std::string& path, const Raster& r);

}  // namespace dgeom
