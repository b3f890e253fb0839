#include "densemap/detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "densemap/errors.hpp"
#include "densemap/random.hpp"

namespace densemap {

std::string to_string(DetectionMethod m) {
    switch (m) {
        case DetectionMethod::LocalMax: return "local-max";
        case DetectionMethod::KMeans: return "kmeans";
        case DetectionMethod::Gmm: return "gmm";
        case DetectionMethod::GmmWeighted: return "gmm-weighted";
        case DetectionMethod::IntProg: return "intprog";
    }
    return "unknown";
}

DetectionMethod detection_method_from_string(const std::string& s) {
    if (s == "local-max") return DetectionMethod::LocalMax;
    if (s == "kmeans") return DetectionMethod::KMeans;
    if (s == "gmm") return DetectionMethod::Gmm;
    if (s == "gmm-weighted") return DetectionMethod::GmmWeighted;
    if (s == "intprog") return DetectionMethod::IntProg;
    throw ValidationError("detection: unknown method '" + s + "'");
}

namespace {

// Clamped-at-zero view restricted to the ROI; cells outside the ROI read 0.
struct ClampedView {
    const DensityMap& map;
    double at(int x, int y) const {
        if (!map.inside_roi(x, y)) return 0.0;
        const double v = map.at(x, y);
        return v > 0.0 ? v : 0.0;
    }
};

double clamped_roi_sum(const DensityMap& map) {
    double sum = 0.0;
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            if (!map.inside_roi(x, y)) continue;
            const double v = map.at(x, y);
            if (v > 0.0) sum += v;
        }
    return sum;
}

} // namespace

std::vector<Segment> threshold_segments(const DensityMap& map, double tau) {
    if (tau < 0.0) throw ValidationError("detection: tau must be >= 0");
    const ClampedView view{map};
    const int w = map.width, h = map.height;
    std::vector<std::int32_t> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<Segment> segments;

    // Row-major scan; flood fill with an explicit stack for determinism.
    std::vector<std::int64_t> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::int64_t idx = static_cast<std::int64_t>(y) * w + x;
            if (label[idx] >= 0 || !(view.at(x, y) > tau)) continue;
            const std::int32_t id = static_cast<std::int32_t>(segments.size());
            Segment seg;
            stack.clear();
            stack.push_back(idx);
            label[idx] = id;
            while (!stack.empty()) {
                const std::int64_t cur = stack.back();
                stack.pop_back();
                const int cx = static_cast<int>(cur % w);
                const int cy = static_cast<int>(cur / w);
                seg.cells.push_back(cur);
                seg.mass += view.at(cx, cy);
                const int nx[4] = {cx - 1, cx + 1, cx, cx};
                const int ny[4] = {cy, cy, cy - 1, cy + 1};
                for (int n = 0; n < 4; ++n) {
                    if (nx[n] < 0 || nx[n] >= w || ny[n] < 0 || ny[n] >= h) continue;
                    const std::int64_t nidx =
                        static_cast<std::int64_t>(ny[n]) * w + nx[n];
                    if (label[nidx] >= 0 || !(view.at(nx[n], ny[n]) > tau)) continue;
                    label[nidx] = id;
                    stack.push_back(nidx);
                }
            }
            std::sort(seg.cells.begin(), seg.cells.end());
            segments.push_back(std::move(seg));
        }
    return segments;
}

GridCounts window_counts(const DensityMap& map, int window, int stride) {
    if (window < 1) throw ValidationError("detection: window must be >= 1");
    if (stride < 1 || stride > window)
        throw ValidationError("detection: stride must satisfy 1 <= stride <= window");
    const ClampedView view{map};
    GridCounts gc;
    gc.window = window;
    gc.stride = stride;
    gc.nx = (map.width - 1) / stride + 1;
    gc.ny = (map.height - 1) / stride + 1;
    gc.counts.assign(static_cast<std::size_t>(gc.nx) * gc.ny, 0.0);
    for (int j = 0; j < gc.ny; ++j) {
        const int y0 = j * stride;
        const int y1 = std::min(map.height, y0 + window);
        for (int i = 0; i < gc.nx; ++i) {
            const int x0 = i * stride;
            const int x1 = std::min(map.width, x0 + window);
            double acc = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) acc += view.at(x, y);
            gc.counts[static_cast<std::size_t>(j) * gc.nx + i] = acc;
        }
    }
    return gc;
}

DetectionSet detect_local_max(const DensityMap& map, double nms_radius,
                              double presmooth_sigma) {
    if (!(nms_radius > 0.0))
        throw ValidationError("detection: nms_radius must be > 0");

    const DensityMap smoothed = gaussian_smooth(map, presmooth_sigma);
    const ClampedView view{smoothed};

    DetectionSet det;
    det.method = DetectionMethod::LocalMax;
    det.source_count = clamped_roi_sum(map);
    const std::int64_t target = std::llround(det.source_count);
    if (target <= 0) return det;

    const int w = map.width, h = map.height;
    std::vector<double> work(static_cast<std::size_t>(w) * h, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            work[static_cast<std::size_t>(y) * w + x] = view.at(x, y);

    const int r = static_cast<int>(std::ceil(nms_radius));
    const double r2 = nms_radius * nms_radius;
    for (std::int64_t pick = 0; pick < target; ++pick) {
        double best = 0.0;
        int bx = -1, by = -1;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double v = work[static_cast<std::size_t>(y) * w + x];
                if (v > best) { // strict: ties keep the lowest (row, col)
                    best = v;
                    bx = x;
                    by = y;
                }
            }
        if (bx < 0) break; // no positive cells left
        det.points.push_back(cell_center(bx, by));
        for (int y = std::max(0, by - r); y <= std::min(h - 1, by + r); ++y)
            for (int x = std::max(0, bx - r); x <= std::min(w - 1, bx + r); ++x) {
                const double dx = x - bx, dy = y - by;
                if (dx * dx + dy * dy <= r2)
                    work[static_cast<std::size_t>(y) * w + x] = 0.0;
            }
    }
    return det;
}

namespace {

// Per-segment cluster counts: K_s = round(mass_s), then adjust the segments
// with the largest |mass - K| until the total matches round(ROI sum), capping
// each K_s by the segment's distinct cell count.
std::vector<int> reconcile_cluster_counts(const std::vector<Segment>& segments,
                                          std::int64_t target) {
    std::vector<int> k(segments.size());
    std::vector<std::int64_t> cap(segments.size());
    std::int64_t total = 0;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        cap[s] = static_cast<std::int64_t>(segments[s].cells.size());
        k[s] = static_cast<int>(
            std::min(cap[s], std::max<std::int64_t>(0, std::llround(segments[s].mass))));
        total += k[s];
    }
    while (total < target) {
        double best_gap = -std::numeric_limits<double>::max();
        std::size_t best = segments.size();
        for (std::size_t s = 0; s < segments.size(); ++s) {
            if (k[s] >= cap[s]) continue;
            const double gap = segments[s].mass - k[s]; // most under-counted first
            if (gap > best_gap) {
                best_gap = gap;
                best = s;
            }
        }
        if (best == segments.size()) break; // support exhausted
        ++k[best];
        ++total;
    }
    while (total > target) {
        double best_gap = -std::numeric_limits<double>::max();
        std::size_t best = segments.size();
        for (std::size_t s = 0; s < segments.size(); ++s) {
            if (k[s] <= 0) continue;
            const double gap = k[s] - segments[s].mass; // most over-counted first
            if (gap > best_gap) {
                best_gap = gap;
                best = s;
            }
        }
        if (best == segments.size()) break;
        --k[best];
        --total;
    }
    return k;
}

std::vector<Point2> segment_cell_centers(const Segment& seg, int width) {
    std::vector<Point2> pts;
    pts.reserve(seg.cells.size());
    for (std::int64_t idx : seg.cells)
        pts.push_back(cell_center(static_cast<int>(idx % width),
                                  static_cast<int>(idx / width)));
    return pts;
}

// Lloyd iterations on unweighted points, farthest-point init, assignment
// fixpoint or 100 iterations. Ties go to the lowest center index.
std::vector<Point2> kmeans_points(const std::vector<Point2>& pts, int k,
                                  std::uint64_t seed) {
    std::vector<Point2> centers = farthest_point_init(pts, k, seed);
    std::vector<int> assign(pts.size(), -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            int bc = 0;
            for (int c = 0; c < k; ++c) {
                const double d2 = squared_distance(pts[i], centers[c]);
                if (d2 < best) {
                    best = d2;
                    bc = c;
                }
            }
            if (assign[i] != bc) {
                assign[i] = bc;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        for (int c = 0; c < k; ++c) {
            double sx = 0.0, sy = 0.0;
            std::int64_t n = 0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (assign[i] == c) {
                    sx += pts[i].x;
                    sy += pts[i].y;
                    ++n;
                }
            if (n > 0) {
                centers[c] = {sx / n, sy / n};
            } else {
                // Empty cluster: restart it at the point farthest from its
                // current assignment's center.
                double best_d2 = -1.0;
                std::size_t best_i = 0;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const double d2 = squared_distance(pts[i], centers[assign[i]]);
                    if (d2 > best_d2) {
                        best_d2 = d2;
                        best_i = i;
                    }
                }
                centers[c] = pts[best_i];
            }
        }
    }
    return centers;
}

// Means of non-convex segments can land outside the ROI; snap those to the
// nearest segment cell center so every detection stays inside.
Point2 snap_into_roi(const Point2& p, const DensityMap& map,
                     const std::vector<Point2>& segment_cells) {
    const int cx = containing_cell_x(p.x);
    const int cy = containing_cell_y(p.y);
    if (cx >= 0 && cx < map.width && cy >= 0 && cy < map.height &&
        map.inside_roi(cx, cy))
        return p;
    double best = std::numeric_limits<double>::max();
    Point2 chosen = p;
    for (const Point2& c : segment_cells) {
        const double d2 = squared_distance(p, c);
        if (d2 < best) {
            best = d2;
            chosen = c;
        }
    }
    return chosen;
}

} // namespace

DetectionSet detect_kmeans(const DensityMap& map, double tau, std::uint64_t seed) {
    DetectionSet det;
    det.method = DetectionMethod::KMeans;
    det.source_count = clamped_roi_sum(map);
    const std::int64_t target = std::llround(det.source_count);
    if (target <= 0) return det;

    const std::vector<Segment> segments = threshold_segments(map, tau);
    if (segments.empty())
        throw DegenerateInputError(
            "kmeans detection: thresholded support is empty but target count is " +
            std::to_string(target));

    const std::vector<int> ks = reconcile_cluster_counts(segments, target);
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (ks[s] <= 0) continue;
        const std::vector<Point2> pts = segment_cell_centers(segments[s], map.width);
        std::vector<Point2> centers =
            kmeans_points(pts, ks[s], mix_seed(seed, s));
        for (Point2& c : centers)
            det.points.push_back(snap_into_roi(c, map, pts));
    }
    return det;
}

DetectionSet detect_gmm(const DensityMap& map, double tau, bool weighted,
                        int quantization, std::uint64_t seed) {
    if (quantization < 1)
        throw ValidationError("gmm detection: quantization must be >= 1");
    DetectionSet det;
    det.method = weighted ? DetectionMethod::GmmWeighted : DetectionMethod::Gmm;
    det.source_count = clamped_roi_sum(map);
    const std::int64_t target = std::llround(det.source_count);
    if (target <= 0) return det;

    const std::vector<Segment> segments = threshold_segments(map, tau);
    const std::vector<int> ks = reconcile_cluster_counts(segments, target);
    const ClampedView view{map};

    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (ks[s] <= 0) continue;
        const std::vector<Point2> pts = segment_cell_centers(segments[s], map.width);
        std::vector<int> weights(pts.size(), 1);
        if (weighted) {
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const std::int64_t idx = segments[s].cells[i];
                const double v = view.at(static_cast<int>(idx % map.width),
                                         static_cast<int>(idx / map.width));
                weights[i] = static_cast<int>(
                    std::max<std::int64_t>(1, std::llround(v * quantization)));
            }
        }
        const GmmParams params =
            fit_gmm(pts, weights, ks[s], mix_seed(seed, s));
        for (const Point2& m : params.means)
            det.points.push_back(snap_into_roi(m, map, pts));
    }
    return det;
}

std::string detections_to_json(int width, int height,
                               const std::vector<DetectionSet>& sets) {
    nlohmann::json j;
    j["width"] = width;
    j["height"] = height;
    j["frames"] = nlohmann::json::array();
    for (const DetectionSet& d : sets) {
        nlohmann::json jf;
        jf["id"] = d.frame_id;
        jf["points"] = nlohmann::json::array();
        for (const Point2& p : d.points)
            jf["points"].push_back(nlohmann::json::array({p.x, p.y}));
        jf["method"] = to_string(d.method);
        jf["source_count"] = d.source_count;
        j["frames"].push_back(std::move(jf));
    }
    return j.dump(2);
}

std::vector<DetectionSet> parse_detections(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("detections: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("detections: invalid JSON: ") + e.what());
    }
    std::vector<DetectionSet> sets;
    for (const auto& jf : j.at("frames")) {
        DetectionSet d;
        d.frame_id = jf.at("id").get<std::int64_t>();
        for (const auto& jp : jf.at("points"))
            d.points.push_back({jp[0].get<double>(), jp[1].get<double>()});
        if (jf.contains("method"))
            d.method = detection_method_from_string(jf["method"].get<std::string>());
        if (jf.contains("source_count"))
            d.source_count = jf["source_count"].get<double>();
        sets.push_back(std::move(d));
    }
    return sets;
}

void write_detections(int width, int height, const std::vector<DetectionSet>& sets,
                      const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("detections: cannot open " + path + " for writing");
    out << detections_to_json(width, height, sets) << "\n";
    if (!out) throw IoError("detections: write failure on " + path);
}

} // namespace densemap
