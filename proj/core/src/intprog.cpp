#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "densemap/detection.hpp"
#include "densemap/errors.hpp"

namespace densemap {

namespace {

struct Candidate {
    int x = 0; // cell coordinates
    int y = 0;
    std::vector<std::int32_t> windows; // indices into the flat window grid
};

void check_intprog_config(const IntProgConfig& cfg) {
    if (cfg.window < 1) throw ValidationError("intprog: window must be >= 1");
    if (cfg.stride < 1 || cfg.stride > cfg.window)
        throw ValidationError("intprog: stride must satisfy 1 <= stride <= window");
    if (cfg.candidate_stride < 1)
        throw ValidationError("intprog: candidate_stride must be >= 1");
}

// Windows at offset (i*stride, j*stride) contain cell (x, y) iff
// i*stride <= x < i*stride + window, same for y.
void window_range(int coord, int window, int stride, int n, int& lo, int& hi) {
    const int below = coord - window; // smallest i has i*stride > below
    lo = below < 0 ? 0 : below / stride + 1;
    hi = std::min(n - 1, coord / stride);
}

std::vector<Candidate> build_candidates(const DensityMap& map,
                                        const IntProgConfig& cfg,
                                        const GridCounts& gc) {
    std::vector<Candidate> cands;
    for (int y = 0; y < map.height; y += cfg.candidate_stride)
        for (int x = 0; x < map.width; x += cfg.candidate_stride) {
            if (!map.inside_roi(x, y)) continue;
            Candidate c;
            c.x = x;
            c.y = y;
            int ix0, ix1, iy0, iy1;
            window_range(x, cfg.window, cfg.stride, gc.nx, ix0, ix1);
            window_range(y, cfg.window, cfg.stride, gc.ny, iy0, iy1);
            for (int j = iy0; j <= iy1; ++j)
                for (int i = ix0; i <= ix1; ++i)
                    c.windows.push_back(static_cast<std::int32_t>(j) * gc.nx + i);
            cands.push_back(std::move(c));
        }
    return cands;
}

double add_delta(const std::vector<double>& residual, const Candidate& c) {
    double delta = 0.0;
    for (std::int32_t w : c.windows)
        delta += std::abs(residual[w] + 1.0) - std::abs(residual[w]);
    return delta;
}

void apply_unit(std::vector<double>& residual, const Candidate& c, double sign) {
    for (std::int32_t w : c.windows) residual[w] += sign;
}

std::vector<int> solve_greedy(const std::vector<Candidate>& cands,
                              std::vector<double> residual, std::int64_t total) {
    std::vector<int> occupancy(cands.size(), 0);
    for (std::int64_t unit = 0; unit < total; ++unit) {
        double best = std::numeric_limits<double>::max();
        std::size_t best_q = 0;
        for (std::size_t q = 0; q < cands.size(); ++q) {
            const double d = add_delta(residual, cands[q]);
            if (d < best) { // strict: ties keep the earliest (row-major) candidate
                best = d;
                best_q = q;
            }
        }
        ++occupancy[best_q];
        apply_unit(residual, cands[best_q], +1.0);
    }

    // Pairwise relocation refinement: move single units while that strictly
    // reduces the objective. Terminates because the objective decreases.
    bool moved = true;
    int passes = 0;
    while (moved && passes < 50) {
        moved = false;
        ++passes;
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (occupancy[a] == 0) continue;
            apply_unit(residual, cands[a], -1.0); // tentatively lift one unit
            double best = add_delta(residual, cands[a]); // putting it back = no-op
            std::size_t best_q = a;
            for (std::size_t b = 0; b < cands.size(); ++b) {
                if (b == a) continue;
                const double d = add_delta(residual, cands[b]);
                if (d < best - 1e-12) {
                    best = d;
                    best_q = b;
                }
            }
            apply_unit(residual, cands[best_q], +1.0);
            if (best_q != a) {
                --occupancy[a];
                ++occupancy[best_q];
                moved = true;
            }
        }
    }
    return occupancy;
}

struct ExactState {
    const std::vector<Candidate>& cands;
    std::vector<double>& residual;
    std::vector<int> current;
    std::vector<int> best;
    double best_obj = std::numeric_limits<double>::max();

    double objective() const {
        double obj = 0.0;
        for (double r : residual) obj += std::abs(r);
        return obj;
    }

    void search(std::size_t q, std::int64_t remaining) {
        if (q == cands.size()) {
            if (remaining == 0) {
                const double obj = objective();
                if (obj < best_obj - 1e-12) {
                    best_obj = obj;
                    best = current;
                }
            }
            return;
        }
        search(q + 1, remaining); // zero units here
        for (std::int64_t k = 1; k <= remaining; ++k) {
            apply_unit(residual, cands[q], +1.0);
            ++current[q];
            search(q + 1, remaining - k);
        }
        while (current[q] > 0) {
            apply_unit(residual, cands[q], -1.0);
            --current[q];
        }
    }
};

} // namespace

DetectionSet detect_intprog(const DensityMap& map, const IntProgConfig& cfg) {
    check_intprog_config(cfg);
    for (double v : map.values)
        if (!std::isfinite(v))
            throw ValidationError("intprog: map contains non-finite values");

    DetectionSet det;
    det.method = DetectionMethod::IntProg;
    const DensityMap clamped = clamp_non_negative(map);
    double roi_sum = 0.0;
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x)
            if (map.inside_roi(x, y)) roi_sum += clamped.at(x, y);
    det.source_count = roi_sum;

    const std::int64_t total = std::llround(roi_sum);
    if (total < 0)
        throw DegenerateInputError("intprog: negative target count " +
                                   std::to_string(total));
    if (total == 0) return det;

    const GridCounts gc = window_counts(map, cfg.window, cfg.stride);
    const std::vector<Candidate> cands = build_candidates(map, cfg, gc);
    if (cands.empty())
        throw DegenerateInputError(
            "intprog: no candidate cells inside the ROI but target count is " +
            std::to_string(total));

    // residual = A x - c, starting from x = 0.
    std::vector<double> residual(gc.counts.size());
    for (std::size_t i = 0; i < gc.counts.size(); ++i) residual[i] = -gc.counts[i];

    std::vector<int> occupancy;
    if (cfg.solver == IntProgSolver::Exact) {
        if (static_cast<int>(cands.size()) > cfg.exact_max_candidates)
            throw CapacityError("intprog: exact solver capped at " +
                                std::to_string(cfg.exact_max_candidates) +
                                " candidates, instance has " +
                                std::to_string(cands.size()));
        if (total > cfg.exact_max_objects)
            throw CapacityError("intprog: exact solver capped at " +
                                std::to_string(cfg.exact_max_objects) +
                                " objects, instance needs " + std::to_string(total));
        ExactState state{cands, residual,
                         std::vector<int>(cands.size(), 0),
                         std::vector<int>(cands.size(), 0),
                         std::numeric_limits<double>::max()};
        state.search(0, total);
        occupancy = state.best;
    } else {
        occupancy = solve_greedy(cands, residual, total);
    }

    for (std::size_t q = 0; q < cands.size(); ++q)
        for (int r = 0; r < occupancy[q]; ++r)
            det.points.push_back(cell_center(cands[q].x, cands[q].y));
    return det;
}

double intprog_objective(const DensityMap& map, const IntProgConfig& cfg,
                         const std::vector<Point2>& detections) {
    check_intprog_config(cfg);
    const GridCounts gc = window_counts(map, cfg.window, cfg.stride);
    std::vector<double> realized(gc.counts.size(), 0.0);
    for (const Point2& p : detections) {
        const int x = containing_cell_x(p.x);
        const int y = containing_cell_y(p.y);
        int ix0, ix1, iy0, iy1;
        window_range(x, cfg.window, cfg.stride, gc.nx, ix0, ix1);
        window_range(y, cfg.window, cfg.stride, gc.ny, iy0, iy1);
        for (int j = iy0; j <= iy1; ++j)
            for (int i = ix0; i <= ix1; ++i)
                realized[static_cast<std::size_t>(j) * gc.nx + i] += 1.0;
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < realized.size(); ++i)
        obj += std::abs(realized[i] - gc.counts[i]);
    return obj;
}

} // namespace densemap
