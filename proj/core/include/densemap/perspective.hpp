#pragma once

#include <vector>

namespace densemap {

/// Per-cell scale of apparent object size: perceived person height at that
/// cell as a ratio against a reference height. Strictly positive everywhere.
struct PerspectiveMap {
    int width = 0;
    int height = 0;
    std::vector<double> scale; // row-major

    static PerspectiveMap constant(int width, int height, double value);
    /// Linear ramp in y from top_scale (first row) to bottom_scale (last row).
    static PerspectiveMap linear_ramp(int width, int height, double top_scale,
                                      double bottom_scale);

    double at(int x, int y) const {
        return scale[static_cast<std::size_t>(y) * width + x];
    }
};

} // namespace densemap
