#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densemap/geometry.hpp"

namespace densemap {

/// Binary region-of-interest mask. Dimensions match the frame it describes.
struct RoiMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> inside; // row-major, 1 = inside

    static RoiMask full(int width, int height);

    bool at(int x, int y) const {
        return inside[static_cast<std::size_t>(y) * width + x] != 0;
    }
    std::size_t count_inside() const;
};

/// Rasterize a closed polygon: a cell is inside iff its center satisfies the
/// even-odd rule. Throws ValidationError for fewer than 3 vertices.
RoiMask rasterize_roi(const std::vector<Point2>& polygon, int width, int height);

/// Load an ROI from a JSON polygon file ({"roi":[[x,y],...]}) or from a DMF1
/// raster where value > 0.5 means inside.
RoiMask read_roi(const std::string& path, int width, int height);

} // namespace densemap
