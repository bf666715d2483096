#include "relaxlim/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaxlim {

namespace {

constexpr const char* kMagic = "RLXF1";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_field(std::ostream& os, const Field& f) {
  const SpectralGrid& g = f.grid();
  os << kMagic << ' ' << g.dim();
  for (int a = 0; a < g.dim(); ++a) os << ' ' << g.n(a);
  os << ' ' << f.components();
  for (int a = 0; a < g.dim(); ++a) os << ' ' << format_double(g.length(a));
  os << '\n';

  std::vector<std::uint64_t> raw(static_cast<std::size_t>(f.points() * f.components()));
  std::size_t pos = 0;
  for (Eigen::Index i = 0; i < f.points(); ++i) {
    for (int c = 0; c < f.components(); ++c) {
      raw[pos++] = to_little_endian(std::bit_cast<std::uint64_t>(f.values()(i, c)));
    }
  }
  os.write(reinterpret_cast<const char*>(raw.data()),
           static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  if (!os) throw std::runtime_error("failed writing RLXF1 data");
}

void write_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field(os, f);
}

Field read_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("missing RLXF1 header");
  std::istringstream hs(header);
  std::string magic;
  int dim = 0;
  hs >> magic >> dim;
  if (magic != kMagic) throw std::runtime_error("not an RLXF1 file");
  if (dim < 1 || dim > 3) throw std::runtime_error("bad RLXF1 dimension");
  std::vector<int> n(dim);
  for (auto& v : n) hs >> v;
  int components = 0;
  hs >> components;
  std::vector<double> len(dim);
  for (auto& v : len) hs >> v;
  if (!hs || components < 1) throw std::runtime_error("malformed RLXF1 header: " + header);
  std::string trailing;
  if (hs >> trailing) throw std::runtime_error("trailing tokens in RLXF1 header");

  auto grid = SpectralGrid::make(dim, n, len);
  const auto count = static_cast<std::size_t>(grid->size() * components);
  std::vector<std::uint64_t> raw(count);
  is.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(count * sizeof(std::uint64_t)));
  if (static_cast<std::size_t>(is.gcount()) != count * sizeof(std::uint64_t)) {
    throw std::runtime_error("truncated RLXF1 payload");
  }
  Field f(grid, components);
  std::size_t pos = 0;
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    for (int c = 0; c < components; ++c) {
      f.values()(i, c) = std::bit_cast<double>(to_little_endian(raw[pos++]));
    }
  }
  if (!f.all_finite()) throw std::runtime_error("RLXF1 payload contains non-finite values");
  return f;
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_field(is);
}

}  // namespace relaxlim
