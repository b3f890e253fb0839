#include "densemap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "densemap/assignment.hpp"
#include "densemap/errors.hpp"

namespace densemap {

namespace {

void check_same_dims(const DensityMap& a, const DensityMap& b, const char* what) {
    if (a.width != b.width || a.height != b.height)
        throw ValidationError(std::string(what) + ": maps are " +
                              std::to_string(a.width) + "x" + std::to_string(a.height) +
                              " vs " + std::to_string(b.width) + "x" +
                              std::to_string(b.height));
}

// Intersection of the two maps' ROIs; cells outside are ignored by metrics.
bool in_effective_roi(const DensityMap& a, const DensityMap& b, int x, int y) {
    return a.inside_roi(x, y) && b.inside_roi(x, y);
}

} // namespace

CountErrors count_errors(const std::vector<double>& predicted,
                         const std::vector<double>& ground_truth) {
    if (predicted.empty() || predicted.size() != ground_truth.size())
        throw ValidationError("count_errors: need equal nonempty count lists, got " +
                              std::to_string(predicted.size()) + " vs " +
                              std::to_string(ground_truth.size()));
    CountErrors e;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - ground_truth[i];
        e.mae += std::abs(d);
        e.mse += d * d;
    }
    e.mae /= static_cast<double>(predicted.size());
    e.mse /= static_cast<double>(predicted.size());
    return e;
}

namespace {

// Nested near-equal split: floor bisection, recursively. Level L+1 boundaries
// always contain level L boundaries, so exposing cancellation can only grow
// the summed absolute error.
void bisect(int lo, int hi, int level, std::vector<std::pair<int, int>>& out) {
    if (level == 0) {
        out.emplace_back(lo, hi);
        return;
    }
    const int mid = lo + (hi - lo) / 2;
    bisect(lo, mid, level - 1, out);
    bisect(mid, hi, level - 1, out);
}

} // namespace

double game(const DensityMap& predicted, const DensityMap& ground_truth, int level) {
    check_same_dims(predicted, ground_truth, "game");
    if (level < 0) throw ValidationError("game: level must be >= 0");

    std::vector<std::pair<int, int>> xs, ys;
    bisect(0, predicted.width, level, xs);
    bisect(0, predicted.height, level, ys);

    double total = 0.0;
    for (const auto& [y0, y1] : ys)
        for (const auto& [x0, x1] : xs) {
            double dp = 0.0, dg = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) {
                    if (!in_effective_roi(predicted, ground_truth, x, y)) continue;
                    dp += predicted.at(x, y);
                    dg += ground_truth.at(x, y);
                }
            total += std::abs(dp - dg);
        }
    return total;
}

void CountClassDistribution::validate() const {
    if (probs.empty())
        throw ValidationError("count distribution: no classes");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0))
            throw ValidationError("count distribution: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("count distribution: probabilities sum to " +
                              std::to_string(sum) + ", expected 1");
}

double loss_density(double d, double dhat) {
    const double diff = d - dhat;
    return diff * diff;
}

double loss_aux(const CountClassDistribution& p, const CountClassDistribution& phat) {
    p.validate();
    phat.validate();
    if (p.probs.size() != phat.probs.size())
        throw ValidationError("loss_aux: class counts differ");
    double loss = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        if (p.probs[i] == 0.0) continue;
        if (phat.probs[i] <= 0.0)
            throw OverflowError("loss_aux: class " + std::to_string(i) +
                                " has true probability " + std::to_string(p.probs[i]) +
                                " but zero predicted probability (loss is infinite)");
        loss -= p.probs[i] * std::log(phat.probs[i]);
    }
    return loss;
}

double loss_combined(double d, double dhat, const CountClassDistribution& p,
                     const CountClassDistribution& phat, const LossConfig& cfg) {
    if (cfg.lambda1 < 0.0 || cfg.lambda2 < 0.0)
        throw ValidationError("loss_combined: weights must be >= 0");
    return cfg.lambda1 * loss_density(d, dhat) + cfg.lambda2 * loss_aux(p, phat);
}

PixelCountLoss loss_pixel_count(const DensityMap& predicted,
                                const DensityMap& ground_truth) {
    check_same_dims(predicted, ground_truth, "loss_pixel_count");
    PixelCountLoss loss;
    double sp = 0.0, sg = 0.0;
    for (int y = 0; y < predicted.height; ++y)
        for (int x = 0; x < predicted.width; ++x) {
            if (!in_effective_roi(predicted, ground_truth, x, y)) continue;
            const double d = predicted.at(x, y) - ground_truth.at(x, y);
            loss.pixel += d * d;
            sp += predicted.at(x, y);
            sg += ground_truth.at(x, y);
        }
    const double dc = sp - sg;
    loss.count = dc * dc;
    return loss;
}

ScatterStats scatter_stats(const DensityMap& predicted,
                           const DensityMap& ground_truth) {
    check_same_dims(predicted, ground_truth, "scatter_stats");
    double sp = 0.0, sg = 0.0;
    std::int64_t n = 0;
    for (int y = 0; y < predicted.height; ++y)
        for (int x = 0; x < predicted.width; ++x) {
            if (!in_effective_roi(predicted, ground_truth, x, y)) continue;
            sp += predicted.at(x, y);
            sg += ground_truth.at(x, y);
            ++n;
        }
    if (n < 2)
        throw ValidationError("scatter_stats: need at least 2 ROI cells");
    const double mp = sp / n, mg = sg / n;
    double cov = 0.0, var_p = 0.0, var_g = 0.0;
    for (int y = 0; y < predicted.height; ++y)
        for (int x = 0; x < predicted.width; ++x) {
            if (!in_effective_roi(predicted, ground_truth, x, y)) continue;
            const double dp = predicted.at(x, y) - mp;
            const double dg = ground_truth.at(x, y) - mg;
            cov += dp * dg;
            var_p += dp * dp;
            var_g += dg * dg;
        }
    if (var_g <= 0.0)
        throw DegenerateInputError("scatter_stats: ground truth has zero variance");

    ScatterStats s;
    s.slope = cov / var_g;
    s.intercept = mp - s.slope * mg;
    s.pearson = var_p > 0.0 ? cov / std::sqrt(var_p * var_g) : 0.0;
    return s;
}

void BoxSpec::validate() const {
    if (!(base_width > 0.0) || !(base_height > 0.0))
        throw ValidationError("box spec: base dimensions must be > 0");
    if (!(reference_scale > 0.0))
        throw ValidationError("box spec: reference_scale must be > 0");
}

namespace {

// Mark the cells whose centers fall inside the (perspective-scaled,
// frame-clipped) box around each annotation. Half-open [lo, hi) intervals.
std::vector<std::uint8_t> box_union_mask(int width, int height,
                                         const std::vector<Point2>& annotations,
                                         const BoxSpec& box) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * height, 0);
    for (const Point2& dot : annotations) {
        double scale = 1.0;
        if (box.perspective) {
            const int cx = std::clamp(containing_cell_x(dot.x), 0,
                                      box.perspective->width - 1);
            const int cy = std::clamp(containing_cell_y(dot.y), 0,
                                      box.perspective->height - 1);
            scale = box.perspective->at(cx, cy) / box.reference_scale;
        }
        const double hw = 0.5 * box.base_width * scale;
        const double hh = 0.5 * box.base_height * scale;
        const int x0 = std::max(0, static_cast<int>(std::ceil(dot.x - hw - 0.5)));
        const int x1 = std::min(width - 1,
                                static_cast<int>(std::ceil(dot.x + hw - 0.5)) - 1);
        const int y0 = std::max(0, static_cast<int>(std::ceil(dot.y - hh - 0.5)));
        const int y1 = std::min(height - 1,
                                static_cast<int>(std::ceil(dot.y + hh - 0.5)) - 1);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                mask[static_cast<std::size_t>(y) * width + x] = 1;
    }
    return mask;
}

double box_sum(const DensityMap& map, const Point2& dot, const BoxSpec& box,
               bool clamp) {
    double scale = 1.0;
    if (box.perspective) {
        const int cx =
            std::clamp(containing_cell_x(dot.x), 0, box.perspective->width - 1);
        const int cy =
            std::clamp(containing_cell_y(dot.y), 0, box.perspective->height - 1);
        scale = box.perspective->at(cx, cy) / box.reference_scale;
    }
    const double hw = 0.5 * box.base_width * scale;
    const double hh = 0.5 * box.base_height * scale;
    const int x0 = std::max(0, static_cast<int>(std::ceil(dot.x - hw - 0.5)));
    const int x1 =
        std::min(map.width - 1, static_cast<int>(std::ceil(dot.x + hw - 0.5)) - 1);
    const int y0 = std::max(0, static_cast<int>(std::ceil(dot.y - hh - 0.5)));
    const int y1 =
        std::min(map.height - 1, static_cast<int>(std::ceil(dot.y + hh - 0.5)) - 1);
    double sum = 0.0;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            if (!map.inside_roi(x, y)) continue;
            double v = map.at(x, y);
            if (clamp && v < 0.0) v = 0.0;
            sum += v;
        }
    return sum;
}

} // namespace

double bbdr(const DensityMap& map, const std::vector<Point2>& annotations,
            const BoxSpec& box) {
    box.validate();
    double total = 0.0;
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            if (!map.inside_roi(x, y)) continue;
            const double v = map.at(x, y);
            if (v > 0.0) total += v;
        }
    if (total <= 0.0)
        throw DegenerateInputError("bbdr: total clamped density is zero");
    if (annotations.empty()) return 0.0;

    const std::vector<std::uint8_t> mask =
        box_union_mask(map.width, map.height, annotations, box);
    double inside = 0.0;
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            if (!map.inside_roi(x, y)) continue;
            if (!mask[static_cast<std::size_t>(y) * map.width + x]) continue;
            const double v = map.at(x, y);
            if (v > 0.0) inside += v;
        }
    return inside / total;
}

double bbmae(const DensityMap& predicted, const DensityMap& ground_truth,
             const std::vector<Point2>& annotations, const BoxSpec& box) {
    box.validate();
    check_same_dims(predicted, ground_truth, "bbmae");
    if (annotations.empty())
        throw ValidationError("bbmae: no annotations");
    double acc = 0.0;
    for (const Point2& dot : annotations)
        acc += std::abs(box_sum(predicted, dot, box, false) -
                        box_sum(ground_truth, dot, box, false));
    return acc / static_cast<double>(annotations.size());
}

double temporal_mad(const std::vector<DensityMap>& sequence) {
    if (sequence.size() < 2)
        throw ValidationError("temporal_mad: need at least 2 frames, got " +
                              std::to_string(sequence.size()));
    double acc = 0.0;
    for (std::size_t t = 0; t + 1 < sequence.size(); ++t) {
        const DensityMap& a = sequence[t];
        const DensityMap& b = sequence[t + 1];
        check_same_dims(a, b, "temporal_mad");
        double sum = 0.0;
        std::int64_t n = 0;
        for (int y = 0; y < a.height; ++y)
            for (int x = 0; x < a.width; ++x) {
                if (!in_effective_roi(a, b, x, y)) continue;
                sum += std::abs(a.at(x, y) - b.at(x, y));
                ++n;
            }
        if (n == 0) throw ValidationError("temporal_mad: empty effective ROI");
        acc += sum / static_cast<double>(n);
    }
    return acc / static_cast<double>(sequence.size() - 1);
}

MatchResult match_detections(const std::vector<Point2>& detections,
                             const std::vector<Point2>& ground_truth,
                             double matching_distance) {
    if (!(matching_distance > 0.0))
        throw ValidationError("match_detections: matching distance must be > 0");

    MatchResult result;
    result.matching_distance = matching_distance;
    const int nd = static_cast<int>(detections.size());
    const int ng = static_cast<int>(ground_truth.size());
    if (nd == 0 || ng == 0) {
        for (int i = 0; i < nd; ++i) result.unmatched_detections.push_back(i);
        for (int j = 0; j < ng; ++j) result.unmatched_gt.push_back(j);
        return result;
    }

    // Forbidden edges (distance beyond the matching radius) are priced above
    // any achievable total distance, so minimizing cost maximizes cardinality
    // first, then minimizes the summed distance.
    const double big =
        (static_cast<double>(std::min(nd, ng)) + 1.0) * (matching_distance + 1.0);
    std::vector<std::vector<double>> cost(nd, std::vector<double>(ng));
    for (int i = 0; i < nd; ++i)
        for (int j = 0; j < ng; ++j) {
            const double d = distance(detections[i], ground_truth[j]);
            cost[i][j] = d <= matching_distance ? d : big;
        }

    const std::vector<int> row_to_col = solve_assignment(cost);
    std::vector<char> gt_used(ng, 0);
    for (int i = 0; i < nd; ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && cost[i][j] < big) {
            result.pairs.push_back({i, j, cost[i][j]});
            gt_used[j] = 1;
        } else {
            result.unmatched_detections.push_back(i);
        }
    }
    for (int j = 0; j < ng; ++j)
        if (!gt_used[j]) result.unmatched_gt.push_back(j);
    return result;
}

Prf prf(const MatchResult& match, int n_detections, int n_ground_truth) {
    const auto tp = static_cast<double>(match.pairs.size());
    if (tp > n_detections || tp > n_ground_truth)
        throw ValidationError("prf: more pairs than detections or ground truths");
    Prf r;
    r.precision = n_detections > 0 ? tp / n_detections : 0.0;
    r.recall = n_ground_truth > 0 ? tp / n_ground_truth : 0.0;
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

TrajectoryStats trajectory_errors(const std::vector<FrameMatch>& frames) {
    TrajectoryStats stats;
    std::int64_t total_gt = 0, missed_gt = 0;
    double ed_sum = 0.0, ed_sq = 0.0, edd_sum = 0.0, edd_sq = 0.0;

    std::map<std::int64_t, Point2> prev_errors; // track id -> error vector
    for (const FrameMatch& f : frames) {
        if (f.track_ids.size() != f.ground_truth.size())
            throw ValidationError(
                "trajectory_errors: frame " + std::to_string(f.frame_id) +
                " needs one track id per ground-truth point (got " +
                std::to_string(f.track_ids.size()) + " ids for " +
                std::to_string(f.ground_truth.size()) + " points)");
        total_gt += static_cast<std::int64_t>(f.ground_truth.size());
        missed_gt += static_cast<std::int64_t>(f.match.unmatched_gt.size());

        std::map<std::int64_t, Point2> cur_errors;
        for (const MatchPair& pair : f.match.pairs) {
            const Point2& det = f.detections[pair.detection];
            const Point2& gt = f.ground_truth[pair.ground_truth];
            const Point2 e{det.x - gt.x, det.y - gt.y};
            const double len = std::hypot(e.x, e.y);
            ed_sum += len;
            ed_sq += len * len;
            ++stats.n_pairs;
            cur_errors[f.track_ids[pair.ground_truth]] = e;
        }
        for (const auto& [track, e] : cur_errors) {
            const auto it = prev_errors.find(track);
            if (it != prev_errors.end()) {
                const double d = std::hypot(e.x - it->second.x, e.y - it->second.y);
                edd_sum += d;
                edd_sq += d * d;
                ++stats.n_edd;
            }
        }
        prev_errors = std::move(cur_errors);
    }

    if (stats.n_pairs > 0) {
        stats.ed_mean = ed_sum / stats.n_pairs;
        stats.ed_std = std::sqrt(
            std::max(0.0, ed_sq / stats.n_pairs - stats.ed_mean * stats.ed_mean));
    }
    if (stats.n_edd > 0) {
        stats.edd_mean = edd_sum / stats.n_edd;
        stats.edd_std = std::sqrt(
            std::max(0.0, edd_sq / stats.n_edd - stats.edd_mean * stats.edd_mean));
    }
    stats.miss_rate =
        total_gt > 0 ? static_cast<double>(missed_gt) / total_gt : 0.0;
    return stats;
}

std::vector<std::pair<double, double>> tracking_precision_curve(
    const std::vector<double>& frame_errors, const std::vector<double>& thresholds) {
    if (frame_errors.empty())
        throw ValidationError("tracking_precision_curve: no frame errors");
    std::vector<std::pair<double, double>> curve;
    curve.reserve(thresholds.size());
    for (double tau : thresholds) {
        std::int64_t within = 0;
        for (double e : frame_errors)
            if (e <= tau) ++within;
        curve.emplace_back(tau,
                           static_cast<double>(within) / frame_errors.size());
    }
    return curve;
}

} // namespace densemap
