#ifndef RELAXLIM_FIELD_IO_HPP_
#define RELAXLIM_FIELD_IO_HPP_

#include "relaxlim/spectral.hpp"

#include <filesystem>
#include <iosfwd>

namespace relaxlim {

// RLXF1 field files: one ASCII header line
//   RLXF1 <dim> <nx> [ny] [nz] <components> <len_x> [len_y] [len_z]
// followed by little-endian float64 samples, row-major, component fastest.

void write_field(std::ostream& os, const Field& f);
void write_field(const std::filesystem::path& path, const Field& f);

Field read_field(std::istream& is);
Field read_field(const std::filesystem::path& path);

}  // namespace relaxlim

#endif  // RELAXLIM_FIELD_IO_HPP_
