#pragma once

#include <complex>
#include <vector>

#include "densemap/density_map.hpp"
#include "densemap/image.hpp"

namespace densemap {

struct TrackerConfig {
    double learning_rate = 0.02;   // template EMA factor, (0, 1]
    double regularization = 1e-2;  // ridge term in the filter fit
    double target_sigma = 0.0;     // Gaussian target std; <= 0 means window/10
    bool cosine_window = true;     // Hann-window the patch before the FFT
};

/// Correlation response over the search window. values[j*width + i] is the
/// response for the frame position (origin.x + i, origin.y + j); origin is
/// the frame coordinate (cell center) of response cell (0, 0).
struct ResponseMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    Point2 origin;

    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
};

/// Linear (single-channel) correlation filter tracker state. The template is
/// the filter's conjugate transfer spectrum, fitted in closed form against a
/// Gaussian-shaped target response and updated by exponential moving average.
struct TrackState {
    int window_w = 0; // even
    int window_h = 0; // even
    std::vector<std::complex<double>> filter; // window_h * window_w spectrum
    Point2 position;  // tracked center, cell-centered frame coordinates
    double learning_rate = 0.02;
    double regularization = 1e-2;
    double target_sigma = 0.0;
    bool cosine_window = true;
};

/// Fit a fresh filter at `center` on the given frame. The window must be
/// even-sized and at most twice the frame in each dimension (one mirror
/// period); otherwise ValidationError.
TrackState init_tracker(const GrayImage& image, const Point2& center, int window_w,
                        int window_h, const TrackerConfig& cfg = {});

/// Cross-correlation of the learned filter with the search window centered
/// at state.position.
ResponseMap tracker_response(const TrackState& state, const GrayImage& image);

/// Density crop aligned to resp.origin with resp's dimensions; cells outside
/// the frame read 0, negative values are clamped to 0.
std::vector<double> crop_density(const DensityMap& density, const ResponseMap& resp);

/// Element-wise product of the (min-shifted, so non-negative) response with
/// the density crop. Throws ValidationError when dimensions differ.
ResponseMap fuse_response(const ResponseMap& resp, const std::vector<double>& density_crop,
                          int crop_w, int crop_h);

/// One tracking step: compute the (optionally fused) response, move to its
/// argmax, and update the template toward the filter fitted at the new
/// position. When the fused map is identically zero the raw response argmax
/// is used instead. Returns the new position.
Point2 track_step(TrackState& state, const GrayImage& image,
                  const DensityMap* density = nullptr);

/// Relative residual of the filter's frequency-domain normal equations
/// against the given patch spectrum fit (diagnostic used by tests).
double filter_fit_residual(const TrackState& state, const GrayImage& image);

} // namespace densemap
