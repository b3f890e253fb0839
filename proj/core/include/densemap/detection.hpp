#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densemap/density_map.hpp"
#include "densemap/gmm.hpp"

namespace densemap {

enum class DetectionMethod { LocalMax, KMeans, Gmm, GmmWeighted, IntProg };

std::string to_string(DetectionMethod m);
DetectionMethod detection_method_from_string(const std::string& s);

/// Point detections recovered from one density map.
struct DetectionSet {
    std::int64_t frame_id = 0;
    std::vector<Point2> points;
    DetectionMethod method = DetectionMethod::LocalMax;
    double source_count = 0.0; // clamped ROI density sum used for K/constraints
};

/// A 4-connected component of above-threshold cells.
struct Segment {
    std::vector<std::int64_t> cells; // row-major indices, ascending
    double mass = 0.0;               // clamped density sum over cells
};

/// Maximal 4-connected components of {ROI cells with clamped value > tau}.
/// Throws ValidationError for tau < 0.
std::vector<Segment> threshold_segments(const DensityMap& map, double tau);

/// Sliding-window density counts: counts[j][i] sums the clamped map over the
/// window at offset (i*stride, j*stride); windows are cropped at borders.
struct GridCounts {
    int window = 0;
    int stride = 0;
    int nx = 0;
    int ny = 0;
    std::vector<double> counts; // ny * nx, row-major
    double at(int i, int j) const {
        return counts[static_cast<std::size_t>(j) * nx + i];
    }
};

GridCounts window_counts(const DensityMap& map, int window, int stride);

/// Greedy non-maximum suppression: optionally presmooth, then repeatedly pick
/// the highest remaining ROI cell and suppress everything within nms_radius,
/// until round(ROI sum) picks are made or no positive cell remains.
DetectionSet detect_local_max(const DensityMap& map, double nms_radius,
                              double presmooth_sigma = 0.0);

/// Per-segment k-means on above-threshold cell centers, K from rounded
/// segment mass with global reconciliation against the rounded ROI sum.
DetectionSet detect_kmeans(const DensityMap& map, double tau, std::uint64_t seed);

/// Per-segment GMM clustering. Unweighted treats every cell equally; weighted
/// replicates cells by their discretized density value
/// (max(1, round(value * quantization))) so means move toward density peaks.
DetectionSet detect_gmm(const DensityMap& map, double tau, bool weighted,
                        int quantization, std::uint64_t seed);

enum class IntProgSolver { Greedy, Exact };

struct IntProgConfig {
    int window = 32;           // default: 8 * sigma at sigma 4
    int stride = 16;           // default: window / 2
    int candidate_stride = 1;
    IntProgSolver solver = IntProgSolver::Greedy;
    int exact_max_candidates = 25; // hard caps for the exact solver
    int exact_max_objects = 4;
};

/// Recover integer object occupancies over a candidate cell lattice by
/// minimizing the L1 distance between realized and observed window counts,
/// subject to a total-count constraint of round(ROI sum). The exact solver
/// enumerates (and is optimal) within its size caps; the greedy solver adds
/// one unit at a time and finishes with pairwise relocation passes.
DetectionSet detect_intprog(const DensityMap& map, const IntProgConfig& cfg);

/// Objective value |A x - c|_1 realized by a detection set under the given
/// window grid; used for solver comparisons.
double intprog_objective(const DensityMap& map, const IntProgConfig& cfg,
                         const std::vector<Point2>& detections);

// Detections JSON: the annotation format plus "method" and "source_count".
std::string detections_to_json(int width, int height,
                               const std::vector<DetectionSet>& sets);
std::vector<DetectionSet> parse_detections(const std::string& path);
void write_detections(int width, int height, const std::vector<DetectionSet>& sets,
                      const std::string& path);

} // namespace densemap
