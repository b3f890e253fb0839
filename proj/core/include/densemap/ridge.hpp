#pragma once

#include <string>
#include <vector>

#include "densemap/density_map.hpp"
#include "densemap/image.hpp"

namespace densemap {

/// Pixel-wise density regressor: a linear model over raw mirror-padded patch
/// intensities plus a bias term. Weight layout is row-major patch pixels with
/// the bias last (patch_size^2 + 1 entries).
struct RidgeModel {
    int patch_size = 0;          // odd, so a center pixel exists
    double ridge_lambda = 0.0;   // >= 0; bias is excluded from the penalty
    std::vector<double> weights; // patch_size^2 + 1, bias last

    void validate() const;
};

/// Row-major patch intensities in [0,1] around `center`'s containing pixel,
/// mirror-padded at borders, with a constant 1 appended.
/// Throws ValidationError for an even patch_size.
std::vector<double> extract_patch(const GrayImage& image, const Point2& center,
                                  int patch_size);

/// Closed-form ridge fit: argmin_w sum_i (w^T x_i - y_i)^2 + lambda*|w'|^2
/// where w' excludes the bias coordinate (assumed last). Throws
/// ValidationError on inconsistent dimensions and SingularityError when
/// lambda = 0 and the design is rank-deficient.
RidgeModel train_ridge(const std::vector<std::vector<double>>& features,
                       const std::vector<double>& targets, double ridge_lambda);

/// Streaming variant used for pixel-wise training sets too large to hold as
/// explicit feature vectors: accumulates the normal equations over all ROI
/// pixels of (image, target map) pairs with the given sampling stride.
RidgeModel train_ridge_on_frames(const std::vector<GrayImage>& images,
                                 const std::vector<DensityMap>& targets,
                                 const RoiMask& roi, int patch_size,
                                 double ridge_lambda, int stride = 1);

/// Predict a density value for every ROI cell (sliding window over cell
/// centers); cells outside the ROI are 0. The result is flagged as a raw
/// prediction (values may be negative).
DensityMap predict_density(const RidgeModel& model, const GrayImage& image,
                           const RoiMask& roi);

// RRM1 model file: magic "RRM1", u32le patch_size, f64le lambda, then
// patch_size^2 + 1 weights as f64 little-endian.
RidgeModel read_ridge_model(const std::string& path);
void write_ridge_model(const RidgeModel& model, const std::string& path);

} // namespace densemap
