#pragma once

#include <optional>
#include <vector>

#include "densemap/roi.hpp"

namespace densemap {

/// A 2D grid of object-density values (objects per pixel area), row-major,
/// top row first. The integral (cell sum) over a region is the expected
/// object count in that region. Negative cell values are permitted only when
/// the map is flagged as a raw prediction; synthesized ground truth is
/// non-negative everywhere.
struct DensityMap {
    int width = 0;
    int height = 0;
    std::vector<double> values; // row-major
    std::optional<RoiMask> roi;
    bool prediction = false; // negatives permitted iff set

    static DensityMap zeros(int width, int height);
    /// Validates finiteness and non-negativity.
    static DensityMap ground_truth(int width, int height, std::vector<double> values);
    /// Validates finiteness only.
    static DensityMap prediction_map(int width, int height, std::vector<double> values);

    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    double& at(int x, int y) {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    bool inside_roi(int x, int y) const {
        return !roi || roi->at(x, y);
    }
};

/// Sum of values over the ROI's inside cells, negatives included as-is.
/// Throws ValidationError on dimension mismatch or an empty-interior ROI.
double sum_in_roi(const DensityMap& map, const RoiMask& roi);

/// Sum over the attached ROI, or the whole frame when none is attached.
double total_density(const DensityMap& map);

/// Copy with negative values clamped to 0 (detection-side view of a
/// prediction; ground truth passes through unchanged).
DensityMap clamp_non_negative(const DensityMap& map);

/// Gaussian blur with symmetric-mirror borders; sigma <= 0 returns the input.
DensityMap gaussian_smooth(const DensityMap& map, double sigma);

} // namespace densemap
