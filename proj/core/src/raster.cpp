#include "dgeom/raster.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dgeom {

namespace {

// Skips whitespace and '#' comment lines, then reads one ASCII token.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
    } else if (!std::isspace(c)) {
      tok.push_back(char(c));
      while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') tok.push_back(char(in.get()));
      return tok;
    }
  }
  throw std::runtime_error("pnm: unexpected end of header");
}

int next_int(std::istream& in) {
  const std::string tok = next_token(in);
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw std::runtime_error("pnm: bad integer '" + tok + "'");
  }
}

}  // namespace

Raster read_pnm(std::istream& in) {
  const std::string magic = next_token(in);
  if (magic != "P1" && magic != "P2" && magic != "P4" && magic != "P5")
    throw std::runtime_error("pnm: unsupported magic '" + magic + "'");
  const int w = next_int(in);
  const int h = next_int(in);
  if (w <= 0 || h <= 0) throw std::runtime_error("pnm: bad dimensions");
  int maxval = 1;
  if (magic == "P2" || magic == "P5") maxval = next_int(in);
  if (maxval <= 0 || maxval > 255) throw std::runtime_error("pnm: unsupported maxval");

  Raster r(w, h);
  if (magic == "P1") {
    for (size_t i = 0; i < r.data.size(); ++i) {
      int c;
      do { c = in.get(); } while (c == ' ' || c == '\n' || c == '\r' || c == '\t');
      if (c != '0' && c != '1') throw std::runtime_error("pnm: bad P1 payload");
      r.data[i] = uint8_t(c == '1' ? 255 : 0);
    }
  } else if (magic == "P2") {
    for (size_t i = 0; i < r.data.size(); ++i) r.data[i] = uint8_t(next_int(in));
  } else if (magic == "P4") {
    in.get();  // single whitespace after header
    const int stride = (w + 7) / 8;
    std::vector<char> row(stride);
    for (int y = 0; y < h; ++y) {
      in.read(row.data(), stride);
      if (in.gcount() != stride) throw std::runtime_error("pnm: truncated P4 payload");
      for (int x = 0; x < w; ++x)
        r.at(x, y) = (row[x / 8] >> (7 - x % 8)) & 1 ? 255 : 0;
    }
  } else {  // P5
    in.get();
    in.read(reinterpret_cast<char*>(r.data.data()), std::streamsize(r.data.size()));
    if (size_t(in.gcount()) != r.data.size()) throw std::runtime_error("pnm: truncated P5 payload");
  }
  return r;
}

Raster read_pnm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_pnm(in);
}

void write_pgm(std::ostream& out, const Raster& r) {
  out << "P5\n" << r.width << " " << r.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(r.data.data()), std::streamsize(r.data.size()));
}

void write_pgm_file(const std::string& path, const Raster& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_pgm(out, r);
}

}  // namespace dgeom
