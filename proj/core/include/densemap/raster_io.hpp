#pragma once

#include <string>

#include "densemap/density_map.hpp"
#include "densemap/perspective.hpp"

namespace densemap {

// DMF1 raster format, bit-exact:
//   bytes 0-3   magic "DMF1"
//   bytes 4-7   width,  u32 little-endian
//   bytes 8-11  height, u32 little-endian
//   then height*width IEEE-754 binary32 little-endian values, row-major,
//   top row first.

/// Read a DMF1 raster. The map is flagged as a prediction iff it contains a
/// negative value. Throws FormatError (naming the byte offset) for a bad
/// header and a size-mismatch FormatError for a truncated/oversized payload.
DensityMap read_density_map(const std::string& path);

/// Read a DMF1 raster as a perspective map; all values must be > 0.
PerspectiveMap read_perspective_map(const std::string& path);

/// Write a DMF1 raster. Values are stored as binary32; a file written from a
/// just-read map is byte-identical to its source. Throws ValidationError for
/// empty dimensions and IoError for unwritable paths.
void write_density_map(const DensityMap& map, const std::string& path);
void write_perspective_map(const PerspectiveMap& map, const std::string& path);

} // namespace densemap
