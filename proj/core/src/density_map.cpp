#include "densemap/density_map.hpp"

#include <cmath>

#include "densemap/errors.hpp"
#include "densemap/geometry.hpp"

namespace densemap {

namespace {

void check_dims(int width, int height, std::size_t n_values) {
    if (width <= 0 || height <= 0)
        throw ValidationError("density map: dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    if (n_values != static_cast<std::size_t>(width) * height)
        throw ValidationError("density map: value count " + std::to_string(n_values) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
}

} // namespace

DensityMap DensityMap::zeros(int width, int height) {
    check_dims(width, height, static_cast<std::size_t>(width) * height);
    DensityMap m;
    m.width = width;
    m.height = height;
    m.values.assign(static_cast<std::size_t>(width) * height, 0.0);
    return m;
}

DensityMap DensityMap::ground_truth(int width, int height, std::vector<double> values) {
    check_dims(width, height, values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw ValidationError("density map: non-finite value at index " +
                                  std::to_string(i));
        if (values[i] < 0.0)
            throw ValidationError(
                "density map: negative value at index " + std::to_string(i) +
                " in a ground-truth map (flag as prediction to allow negatives)");
    }
    DensityMap m;
    m.width = width;
    m.height = height;
    m.values = std::move(values);
    return m;
}

DensityMap DensityMap::prediction_map(int width, int height, std::vector<double> values) {
    check_dims(width, height, values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw ValidationError("density map: non-finite value at index " +
                                  std::to_string(i));
    DensityMap m;
    m.width = width;
    m.height = height;
    m.values = std::move(values);
    m.prediction = true;
    return m;
}

double sum_in_roi(const DensityMap& map, const RoiMask& roi) {
    if (map.width != roi.width || map.height != roi.height)
        throw ValidationError("sum_in_roi: map is " + std::to_string(map.width) + "x" +
                              std::to_string(map.height) + ", roi is " +
                              std::to_string(roi.width) + "x" +
                              std::to_string(roi.height));
    if (roi.count_inside() == 0)
        throw ValidationError("sum_in_roi: ROI has no inside cells");
    double sum = 0.0;
    const std::size_t n = map.values.size();
    for (std::size_t i = 0; i < n; ++i)
        if (roi.inside[i]) sum += map.values[i];
    return sum;
}

double total_density(const DensityMap& map) {
    if (map.roi) return sum_in_roi(map, *map.roi);
    double sum = 0.0;
    for (double v : map.values) sum += v;
    return sum;
}

DensityMap clamp_non_negative(const DensityMap& map) {
    DensityMap out = map;
    for (double& v : out.values)
        if (v < 0.0) v = 0.0;
    return out;
}

DensityMap gaussian_smooth(const DensityMap& map, double sigma) {
    if (sigma <= 0.0) return map;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        ksum += kernel[i + radius];
    }
    for (double& k : kernel) k /= ksum;

    DensityMap out = map;
    std::vector<double> tmp(map.values.size());
    // horizontal pass
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * map.at(mirror_index(x + i, map.width), y);
            tmp[static_cast<std::size_t>(y) * map.width + x] = acc;
        }
    // vertical pass
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] *
                       tmp[static_cast<std::size_t>(mirror_index(y + i, map.height)) *
                               map.width +
                           x];
            out.at(x, y) = acc;
        }
    return out;
}

} // namespace densemap
