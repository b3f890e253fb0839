#pragma once

#include <cstdint>
#include <optional>

#include "densemap/annotations.hpp"
#include "densemap/density_map.hpp"
#include "densemap/perspective.hpp"

namespace densemap {

enum class SigmaMode { Fixed, PerspectiveScaled };
enum class DotNormalization { None, PerDotRenormalize };

/// Ground-truth synthesis settings: one isotropic Gaussian kernel per dot
/// annotation, evaluated at cell centers and truncated at
/// truncation_radius * sigma (Euclidean). With PerDotRenormalize each dot's
/// truncated in-frame kernel is rescaled so its cell sum is exactly 1, which
/// keeps region counts exact even near borders.
struct SynthesisConfig {
    double sigma = 4.0;                     // base Gaussian std, pixels
    SigmaMode mode = SigmaMode::Fixed;
    std::optional<PerspectiveMap> perspective; // present iff PerspectiveScaled
    double reference_scale = 1.0;           // perspective value where sigma applies
    double truncation_radius = 4.0;         // in multiples of sigma, >= 3
    DotNormalization normalization = DotNormalization::PerDotRenormalize;

    /// Throws ValidationError if the invariants do not hold.
    void validate() const;
};

/// Effective Gaussian std at a point: sigma in fixed mode,
/// sigma * perspective(at) / reference_scale in perspective mode.
double effective_sigma(const SynthesisConfig& cfg, const Point2& at);

/// Density map for one annotated frame: sum of per-dot truncated Gaussians.
/// Throws NotFoundError for an unknown frame id and ValidationError for a
/// dot outside the frame.
DensityMap synthesize_density(const DotAnnotations& ann, std::int64_t frame_id,
                              const SynthesisConfig& cfg, int width, int height);

/// Count of annotated points whose containing cell is inside the ROI.
std::int64_t ground_truth_count(const DotAnnotations& ann, std::int64_t frame_id,
                                const RoiMask& roi);

/// Peak value of a unit 2D Gaussian with the given std (used for
/// threshold defaults).
inline double gaussian_peak(double sigma) {
    return 1.0 / (6.283185307179586476925286766559 * sigma * sigma);
}

} // namespace densemap
