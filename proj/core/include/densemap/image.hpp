#pragma once

#include <string>
#include <vector>

namespace densemap {

/// Grayscale image with intensities in [0, 1], row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    static GrayImage zeros(int width, int height);

    double at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    double& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

/// 8-bit binary PGM (P5, maxval 255). Intensities quantize as
/// round(v * 255) on write and byte / 255.0 on read.
GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& image, const std::string& path);

} // namespace densemap
