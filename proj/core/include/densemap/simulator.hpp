#pragma once

#include <cstdint>
#include <vector>

#include "densemap/annotations.hpp"
#include "densemap/image.hpp"
#include "densemap/perspective.hpp"

namespace densemap {

/// Synthetic crowd scene: moving bright blobs on a dark background under a
/// linear perspective ramp, with additive Gaussian pixel noise. Fully
/// deterministic given the seed (portable RNG, see random.hpp).
struct SceneConfig {
    int width = 160;
    int height = 120;
    int n_people = 10;
    int n_frames = 10;
    double top_scale = 0.6;          // perspective at the first row
    double bottom_scale = 1.4;       // perspective at the last row
    double person_render_sigma = 2.0; // blob std at perspective scale 1
    double speed = 1.0;              // mean px/frame
    double noise_sigma = 0.02;       // additive image noise std
    std::uint64_t seed = 1;

    void validate() const;
};

struct SimulatedScene {
    std::vector<GrayImage> images;
    DotAnnotations annotations; // with persistent track_ids
    PerspectiveMap perspective;
};

/// n_people constant-velocity walkers with small seeded heading jitter,
/// reflecting at the frame borders (so the per-frame count is constant).
/// Each person renders as an isotropic Gaussian blob whose std follows the
/// perspective at their position; pixel values clip to [0, 1].
SimulatedScene simulate_scene(const SceneConfig& cfg);

/// Two-person scene on converging-then-diverging paths: the pair approaches
/// within one blob diameter (6 sigma at the local perspective) at the
/// midpoint frame, then separates. Person 0 moves left-to-right.
SimulatedScene scenario_distractor(const SceneConfig& cfg);

} // namespace densemap
