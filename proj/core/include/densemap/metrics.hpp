#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "densemap/density_map.hpp"
#include "densemap/detection.hpp"
#include "densemap/perspective.hpp"

namespace densemap {

// ---------------------------------------------------------------------------
// Counting errors
// ---------------------------------------------------------------------------

struct CountErrors {
    double mae = 0.0;
    double mse = 0.0; // mean of squared errors (not its root)
};

/// MAE / MSE over paired per-frame counts. Throws ValidationError for empty
/// or mismatched lists.
CountErrors count_errors(const std::vector<double>& predicted,
                         const std::vector<double>& ground_truth);

/// Grid average absolute counting error at level L for one frame pair: the
/// frame is split into 2^L x 2^L nested near-equal rectangles (recursive
/// floor bisection, so level L+1 refines level L) and the per-rectangle
/// absolute count differences are summed. Level 0 equals |count difference|.
double game(const DensityMap& predicted, const DensityMap& ground_truth, int level);

// ---------------------------------------------------------------------------
// Training-style losses (evaluation functions here)
// ---------------------------------------------------------------------------

struct CountClassDistribution {
    std::vector<double> probs; // >= 0, sums to 1

    void validate() const;
};

struct LossConfig {
    double lambda1 = 100.0;
    double lambda2 = 1.0;
};

/// Squared error between two density values.
double loss_density(double d, double dhat);
/// Categorical cross entropy; throws OverflowError when a supported class
/// has zero predicted probability.
double loss_aux(const CountClassDistribution& p, const CountClassDistribution& phat);
double loss_combined(double d, double dhat, const CountClassDistribution& p,
                     const CountClassDistribution& phat, const LossConfig& cfg);

struct PixelCountLoss {
    double pixel = 0.0; // sum of per-cell squared differences
    double count = 0.0; // squared difference of the two totals
};

PixelCountLoss loss_pixel_count(const DensityMap& predicted,
                                const DensityMap& ground_truth);

// ---------------------------------------------------------------------------
// Per-pixel fidelity, compactness / localization, temporal smoothness
// ---------------------------------------------------------------------------

struct ScatterStats {
    double pearson = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
};

/// Pearson correlation and least-squares line of predicted on ground truth
/// over ROI cells. Throws DegenerateInputError when the ground truth has
/// zero variance.
ScatterStats scatter_stats(const DensityMap& predicted,
                           const DensityMap& ground_truth);

/// Perspective-scaled bounding box placed over each dot annotation.
struct BoxSpec {
    double base_width = 0.0;  // box extent at reference_scale, pixels
    double base_height = 0.0;
    std::optional<PerspectiveMap> perspective;
    double reference_scale = 1.0;

    void validate() const;
};

/// Fraction of total (clamped, ROI) density inside the union of annotation
/// boxes; in [0, 1]. Cell membership is by cell center. Throws
/// DegenerateInputError when the total density is zero.
double bbdr(const DensityMap& map, const std::vector<Point2>& annotations,
            const BoxSpec& box);

/// Mean over annotation boxes of |sum_box(pred) - sum_box(gt)|.
/// Throws ValidationError when there are no annotations.
double bbmae(const DensityMap& predicted, const DensityMap& ground_truth,
             const std::vector<Point2>& annotations, const BoxSpec& box);

/// Mean absolute difference between consecutive density maps, averaged over
/// ROI cells and then over consecutive pairs. Needs >= 2 frames.
double temporal_mad(const std::vector<DensityMap>& sequence);

// ---------------------------------------------------------------------------
// Detection matching and derived scores
// ---------------------------------------------------------------------------

struct MatchPair {
    int detection = 0;
    int ground_truth = 0;
    double dist = 0.0;
};

struct MatchResult {
    std::vector<MatchPair> pairs; // injective both ways
    std::vector<int> unmatched_detections;
    std::vector<int> unmatched_gt;
    double matching_distance = 0.0;
};

/// Unique pairing of detections with ground-truth points within
/// matching_distance: maximum cardinality first, minimal total distance
/// among maximum matchings.
MatchResult match_detections(const std::vector<Point2>& detections,
                             const std::vector<Point2>& ground_truth,
                             double matching_distance);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Precision/recall/F1 with 0/0 -> 0 conventions.
Prf prf(const MatchResult& match, int n_detections, int n_ground_truth);

/// One frame's matching along with the data needed for trajectory metrics.
struct FrameMatch {
    std::int64_t frame_id = 0;
    std::vector<Point2> detections;
    std::vector<Point2> ground_truth;
    std::vector<std::int64_t> track_ids; // parallel to ground_truth
    MatchResult match;
};

struct TrajectoryStats {
    double ed_mean = 0.0;  // |detection - gt| over matched pairs
    double ed_std = 0.0;
    double edd_mean = 0.0; // |e_(t+1) - e_t| along tracks matched in both frames
    double edd_std = 0.0;
    double miss_rate = 0.0; // unmatched gt / total gt
    std::int64_t n_pairs = 0;
    std::int64_t n_edd = 0;
};

/// Adjacent entries of `frames` are treated as consecutive video frames.
/// Throws ValidationError when track ids are missing.
TrajectoryStats trajectory_errors(const std::vector<FrameMatch>& frames);

/// Precision curve: fraction of frames with error <= threshold, per
/// threshold; non-decreasing in the threshold.
std::vector<std::pair<double, double>> tracking_precision_curve(
    const std::vector<double>& frame_errors, const std::vector<double>& thresholds);

} // namespace densemap
