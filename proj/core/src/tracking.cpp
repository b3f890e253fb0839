#include "densemap/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "densemap/errors.hpp"
#include "densemap/geometry.hpp"

namespace densemap {

namespace {

// Shared 2D complex FFT plans keyed by window size. Plan creation is not
// thread-safe in FFTW, execution with new-array interfaces is; plans use
// FFTW_UNALIGNED so they run on plain std::vector storage.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    void forward(int w, int h, std::complex<double>* data) {
        execute(get(w, h).fwd, data);
    }
    void backward(int w, int h, std::complex<double>* data) {
        execute(get(w, h).bwd, data);
    }

private:
    struct Pair {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    const Pair& get(int w, int h) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find({w, h});
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch(static_cast<std::size_t>(w) * h);
        auto* raw = reinterpret_cast<fftw_complex*>(scratch.data());
        Pair p;
        p.fwd = fftw_plan_dft_2d(h, w, raw, raw, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft_2d(h, w, raw, raw, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        return plans_.emplace(std::make_pair(w, h), p).first->second;
    }

    static void execute(fftw_plan plan, std::complex<double>* data) {
        auto* raw = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(plan, raw, raw);
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, Pair> plans_;
};

std::vector<double> hann_window(int n) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(6.283185307179586476925286766559 * i / (n - 1)));
    return w;
}

// Mirror-padded window around the center cell, mean-subtracted and
// (optionally) Hann-windowed, as a complex spectrum-ready buffer.
std::vector<std::complex<double>> preprocess_patch(const GrayImage& image,
                                                   int center_x, int center_y, int w,
                                                   int h, bool cosine) {
    std::vector<double> patch(static_cast<std::size_t>(w) * h);
    double mean = 0.0;
    for (int y = 0; y < h; ++y) {
        const int iy = mirror_index(center_y - h / 2 + y, image.height);
        for (int x = 0; x < w; ++x) {
            const int ix = mirror_index(center_x - w / 2 + x, image.width);
            const double v = image.at(ix, iy);
            patch[static_cast<std::size_t>(y) * w + x] = v;
            mean += v;
        }
    }
    mean /= static_cast<double>(w) * h;

    std::vector<std::complex<double>> out(patch.size());
    if (cosine) {
        const std::vector<double> wx = hann_window(w);
        const std::vector<double> wy = hann_window(h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                out[static_cast<std::size_t>(y) * w + x] =
                    (patch[static_cast<std::size_t>(y) * w + x] - mean) * wx[x] * wy[y];
    } else {
        for (std::size_t i = 0; i < patch.size(); ++i) out[i] = patch[i] - mean;
    }
    FftPlans::instance().forward(w, h, out.data());
    return out;
}

// Spectrum of the Gaussian-shaped target response peaked at (w/2, h/2).
std::vector<std::complex<double>> target_spectrum(int w, int h, double sigma) {
    std::vector<std::complex<double>> g(static_cast<std::size_t>(w) * h);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = x - w / 2;
            const double dy = y - h / 2;
            g[static_cast<std::size_t>(y) * w + x] =
                std::exp(-(dx * dx + dy * dy) * inv);
        }
    FftPlans::instance().forward(w, h, g.data());
    return g;
}

// Closed-form ridge fit in the frequency domain:
//   W_k = G_k * conj(P_k) / (|P_k|^2 + lambda).
std::vector<std::complex<double>> fit_filter(
    const std::vector<std::complex<double>>& patch_spectrum,
    const std::vector<std::complex<double>>& target, double lambda) {
    std::vector<std::complex<double>> filter(patch_spectrum.size());
    for (std::size_t i = 0; i < patch_spectrum.size(); ++i) {
        const std::complex<double>& p = patch_spectrum[i];
        filter[i] = target[i] * std::conj(p) / (std::norm(p) + lambda);
    }
    return filter;
}

void validate_window(const GrayImage& image, int w, int h) {
    if (w <= 0 || h <= 0 || w % 2 != 0 || h % 2 != 0)
        throw ValidationError("tracker: window must be even-sized and positive, got " +
                              std::to_string(w) + "x" + std::to_string(h));
    if (w > 2 * image.width || h > 2 * image.height)
        throw ValidationError("tracker: window " + std::to_string(w) + "x" +
                              std::to_string(h) + " exceeds the mirror-padded " +
                              std::to_string(image.width) + "x" +
                              std::to_string(image.height) + " frame");
}

} // namespace

TrackState init_tracker(const GrayImage& image, const Point2& center, int window_w,
                        int window_h, const TrackerConfig& cfg) {
    validate_window(image, window_w, window_h);
    if (!(cfg.learning_rate > 0.0) || cfg.learning_rate > 1.0)
        throw ValidationError("tracker: learning_rate must be in (0, 1]");
    if (!(cfg.regularization > 0.0))
        throw ValidationError("tracker: regularization must be > 0");

    TrackState state;
    state.window_w = window_w;
    state.window_h = window_h;
    state.learning_rate = cfg.learning_rate;
    state.regularization = cfg.regularization;
    state.target_sigma = cfg.target_sigma > 0.0
                             ? cfg.target_sigma
                             : std::min(window_w, window_h) / 10.0;
    state.cosine_window = cfg.cosine_window;

    const int cx = containing_cell_x(center.x);
    const int cy = containing_cell_y(center.y);
    if (cx < 0 || cx >= image.width || cy < 0 || cy >= image.height)
        throw ValidationError("tracker: init center outside the frame");
    state.position = cell_center(cx, cy);

    const auto patch = preprocess_patch(image, cx, cy, window_w, window_h,
                                        state.cosine_window);
    const auto target = target_spectrum(window_w, window_h, state.target_sigma);
    state.filter = fit_filter(patch, target, state.regularization);
    return state;
}

ResponseMap tracker_response(const TrackState& state, const GrayImage& image) {
    if (state.filter.size() !=
        static_cast<std::size_t>(state.window_w) * state.window_h)
        throw ValidationError("tracker: state has no fitted filter");
    const int w = state.window_w, h = state.window_h;
    const int cx = containing_cell_x(state.position.x);
    const int cy = containing_cell_y(state.position.y);

    auto spectrum = preprocess_patch(image, cx, cy, w, h, state.cosine_window);
    for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= state.filter[i];
    FftPlans::instance().backward(w, h, spectrum.data());

    ResponseMap resp;
    resp.width = w;
    resp.height = h;
    resp.origin = cell_center(cx - w / 2, cy - h / 2);
    resp.values.resize(spectrum.size());
    const double scale = 1.0 / (static_cast<double>(w) * h);
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        resp.values[i] = spectrum[i].real() * scale;
    return resp;
}

std::vector<double> crop_density(const DensityMap& density, const ResponseMap& resp) {
    std::vector<double> crop(static_cast<std::size_t>(resp.width) * resp.height, 0.0);
    const int x0 = containing_cell_x(resp.origin.x);
    const int y0 = containing_cell_y(resp.origin.y);
    for (int y = 0; y < resp.height; ++y) {
        const int dy = y0 + y;
        if (dy < 0 || dy >= density.height) continue;
        for (int x = 0; x < resp.width; ++x) {
            const int dx = x0 + x;
            if (dx < 0 || dx >= density.width) continue;
            const double v = density.at(dx, dy);
            if (v > 0.0) crop[static_cast<std::size_t>(y) * resp.width + x] = v;
        }
    }
    return crop;
}

ResponseMap fuse_response(const ResponseMap& resp,
                          const std::vector<double>& density_crop, int crop_w,
                          int crop_h) {
    if (crop_w != resp.width || crop_h != resp.height ||
        density_crop.size() != resp.values.size())
        throw ValidationError("fuse_response: density crop is " +
                              std::to_string(crop_w) + "x" + std::to_string(crop_h) +
                              ", response is " + std::to_string(resp.width) + "x" +
                              std::to_string(resp.height));
    double min_v = 0.0;
    for (double v : resp.values) min_v = std::min(min_v, v);

    ResponseMap fused = resp;
    for (std::size_t i = 0; i < fused.values.size(); ++i) {
        const double d = density_crop[i] > 0.0 ? density_crop[i] : 0.0;
        fused.values[i] = (resp.values[i] - min_v) * d;
    }
    return fused;
}

namespace {

// Row-major argmax with strict comparison: ties keep the lowest (row, col).
std::pair<int, int> argmax_cell(const ResponseMap& resp, bool* positive = nullptr) {
    double best = -std::numeric_limits<double>::max();
    int bx = 0, by = 0;
    for (int y = 0; y < resp.height; ++y)
        for (int x = 0; x < resp.width; ++x)
            if (resp.at(x, y) > best) {
                best = resp.at(x, y);
                bx = x;
                by = y;
            }
    if (positive) *positive = best > 0.0;
    return {bx, by};
}

} // namespace

Point2 track_step(TrackState& state, const GrayImage& image,
                  const DensityMap* density) {
    const ResponseMap resp = tracker_response(state, image);

    std::pair<int, int> arg;
    if (density) {
        const std::vector<double> crop = crop_density(*density, resp);
        const ResponseMap fused = fuse_response(resp, crop, resp.width, resp.height);
        bool positive = false;
        arg = argmax_cell(fused, &positive);
        if (!positive) arg = argmax_cell(resp); // zero density: fall back to raw
    } else {
        arg = argmax_cell(resp);
    }

    int nx = containing_cell_x(resp.origin.x) + arg.first;
    int ny = containing_cell_y(resp.origin.y) + arg.second;
    nx = std::clamp(nx, 0, image.width - 1);
    ny = std::clamp(ny, 0, image.height - 1);
    state.position = cell_center(nx, ny);

    const auto patch = preprocess_patch(image, nx, ny, state.window_w,
                                        state.window_h, state.cosine_window);
    const auto target =
        target_spectrum(state.window_w, state.window_h, state.target_sigma);
    const auto fitted = fit_filter(patch, target, state.regularization);
    const double lr = state.learning_rate;
    for (std::size_t i = 0; i < state.filter.size(); ++i)
        state.filter[i] = (1.0 - lr) * state.filter[i] + lr * fitted[i];
    return state.position;
}

double filter_fit_residual(const TrackState& state, const GrayImage& image) {
    const int cx = containing_cell_x(state.position.x);
    const int cy = containing_cell_y(state.position.y);
    const auto patch = preprocess_patch(image, cx, cy, state.window_w,
                                        state.window_h, state.cosine_window);
    const auto target =
        target_spectrum(state.window_w, state.window_h, state.target_sigma);
    const auto fitted = fit_filter(patch, target, state.regularization);
    // || W (|P|^2 + lambda) - G conj(P) || / || G conj(P) ||
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const std::complex<double> lhs =
            fitted[i] * (std::norm(patch[i]) + state.regularization);
        const std::complex<double> rhs = target[i] * std::conj(patch[i]);
        num += std::norm(lhs - rhs);
        den += std::norm(rhs);
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

} // namespace densemap
