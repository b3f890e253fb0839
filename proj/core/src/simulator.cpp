#include "densemap/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "densemap/errors.hpp"
#include "densemap/random.hpp"

namespace densemap {

void SceneConfig::validate() const {
    if (width <= 0 || height <= 0)
        throw ValidationError("simulator: frame dimensions must be positive");
    if (n_people < 0) throw ValidationError("simulator: n_people must be >= 0");
    if (n_frames <= 0) throw ValidationError("simulator: n_frames must be >= 1");
    if (!(top_scale > 0.0) || !(bottom_scale > 0.0) || top_scale > bottom_scale)
        throw ValidationError(
            "simulator: need 0 < top_scale <= bottom_scale, got " +
            std::to_string(top_scale) + " / " + std::to_string(bottom_scale));
    if (!(person_render_sigma > 0.0))
        throw ValidationError("simulator: person_render_sigma must be > 0");
    if (speed < 0.0) throw ValidationError("simulator: speed must be >= 0");
    if (noise_sigma < 0.0)
        throw ValidationError("simulator: noise_sigma must be >= 0");
}

namespace {

constexpr double kBlobAmplitude = 0.85;
constexpr double kHeadingJitter = 0.05; // radians per frame

// Fold a coordinate into [0, n), reflecting the velocity on each bounce.
void reflect_into(double& x, double& v, double n) {
    while (x < 0.0 || x >= n) {
        if (x < 0.0) {
            x = -x;
            v = -v;
        } else {
            x = 2.0 * n - x;
            v = -v;
            if (x >= n) x = std::nextafter(n, 0.0);
        }
    }
}

void render_blob(GrayImage& img, const Point2& pos, double sigma) {
    const double radius = 4.0 * sigma;
    const double r2 = radius * radius;
    const double inv = 1.0 / (2.0 * sigma * sigma);
    const int x0 = std::max(0, containing_cell_x(pos.x - radius));
    const int x1 = std::min(img.width - 1, containing_cell_x(pos.x + radius));
    const int y0 = std::max(0, containing_cell_y(pos.y - radius));
    const int y1 = std::min(img.height - 1, containing_cell_y(pos.y + radius));
    for (int y = y0; y <= y1; ++y) {
        const double dy = (y + 0.5) - pos.y;
        for (int x = x0; x <= x1; ++x) {
            const double dx = (x + 0.5) - pos.x;
            const double d2 = dx * dx + dy * dy;
            if (d2 <= r2) img.at(x, y) += kBlobAmplitude * std::exp(-d2 * inv);
        }
    }
}

double perspective_at(const PerspectiveMap& persp, const Point2& pos) {
    const int cx = std::clamp(containing_cell_x(pos.x), 0, persp.width - 1);
    const int cy = std::clamp(containing_cell_y(pos.y), 0, persp.height - 1);
    return persp.at(cx, cy);
}

GrayImage render_frame(const SceneConfig& cfg, const PerspectiveMap& persp,
                       const std::vector<Point2>& positions,
                       std::uint64_t noise_seed) {
    GrayImage img = GrayImage::zeros(cfg.width, cfg.height);
    for (const Point2& pos : positions)
        render_blob(img, pos, cfg.person_render_sigma * perspective_at(persp, pos));
    for (double& v : img.pixels) v = std::min(1.0, v);
    if (cfg.noise_sigma > 0.0) {
        Rng noise(noise_seed);
        for (double& v : img.pixels)
            v = std::clamp(v + noise.gaussian(0.0, cfg.noise_sigma), 0.0, 1.0);
    }
    return img;
}

SimulatedScene assemble(const SceneConfig& cfg,
                        const std::vector<std::vector<Point2>>& tracks) {
    SimulatedScene scene;
    scene.perspective = PerspectiveMap::linear_ramp(cfg.width, cfg.height,
                                                    cfg.top_scale, cfg.bottom_scale);
    scene.annotations.width = cfg.width;
    scene.annotations.height = cfg.height;
    const std::size_t n_people = tracks.size();

    for (int t = 0; t < cfg.n_frames; ++t) {
        AnnotationFrame frame;
        frame.frame_id = t;
        std::vector<std::int64_t> ids;
        std::vector<Point2> positions;
        for (std::size_t i = 0; i < n_people; ++i) {
            positions.push_back(tracks[i][t]);
            frame.points.push_back(tracks[i][t]);
            ids.push_back(static_cast<std::int64_t>(i));
        }
        frame.track_ids = std::move(ids);
        scene.annotations.frames.push_back(std::move(frame));
        scene.images.push_back(render_frame(cfg, scene.perspective, positions,
                                            mix_seed(cfg.seed, 0xA0150000ULL + t)));
    }
    validate_and_sort(scene.annotations);
    return scene;
}

} // namespace

SimulatedScene simulate_scene(const SceneConfig& cfg) {
    cfg.validate();

    std::vector<std::vector<Point2>> tracks(cfg.n_people);
    for (int i = 0; i < cfg.n_people; ++i) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        Point2 pos{rng.uniform(0.0, cfg.width), rng.uniform(0.0, cfg.height)};
        const double person_speed = cfg.speed * (0.75 + 0.5 * rng.uniform());
        double heading = rng.uniform(0.0, 6.283185307179586476925286766559);
        tracks[i].reserve(cfg.n_frames);
        for (int t = 0; t < cfg.n_frames; ++t) {
            tracks[i].push_back(pos);
            heading += rng.gaussian(0.0, kHeadingJitter);
            double vx = person_speed * std::cos(heading);
            double vy = person_speed * std::sin(heading);
            pos.x += vx;
            pos.y += vy;
            reflect_into(pos.x, vx, cfg.width);
            reflect_into(pos.y, vy, cfg.height);
        }
    }
    return assemble(cfg, tracks);
}

SimulatedScene scenario_distractor(const SceneConfig& cfg) {
    cfg.validate();
    if (cfg.n_frames < 3)
        throw ValidationError("distractor scenario: need at least 3 frames");

    Rng rng(mix_seed(cfg.seed, 0xD15742C7ULL));
    const double cx = cfg.width / 2.0;
    const double cy =
        cfg.height / 2.0 + (rng.uniform() - 0.5) * 0.1 * cfg.height;

    const PerspectiveMap persp = PerspectiveMap::linear_ramp(
        cfg.width, cfg.height, cfg.top_scale, cfg.bottom_scale);
    const double local_sigma =
        cfg.person_render_sigma * perspective_at(persp, {cx, cy});
    const double diameter = 6.0 * local_sigma * (0.95 + 0.1 * rng.uniform());

    const int mid = cfg.n_frames / 2;
    double vx = std::max(0.5, cfg.speed) * (0.9 + 0.2 * rng.uniform());
    const double margin = 4.0 * local_sigma + 2.0;
    const double reach = std::max(mid, cfg.n_frames - 1 - mid);
    if (reach > 0) vx = std::min(vx, (cfg.width / 2.0 - margin) / reach);

    // Both tracks cross x = cx exactly at the midpoint frame while their
    // y-gap stays one blob diameter, so the minimum separation lands there.
    std::vector<std::vector<Point2>> tracks(2);
    for (int t = 0; t < cfg.n_frames; ++t) {
        const double dx = vx * (t - mid);
        double ax = cx + dx, bx = cx - dx;
        double ay = cy - diameter / 2.0, by = cy + diameter / 2.0;
        ax = std::clamp(ax, 0.0, std::nextafter(double(cfg.width), 0.0));
        bx = std::clamp(bx, 0.0, std::nextafter(double(cfg.width), 0.0));
        ay = std::clamp(ay, 0.0, std::nextafter(double(cfg.height), 0.0));
        by = std::clamp(by, 0.0, std::nextafter(double(cfg.height), 0.0));
        tracks[0].push_back({ax, ay});
        tracks[1].push_back({bx, by});
    }
    return assemble(cfg, tracks);
}

} // namespace densemap
