#include "densemap/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "densemap/errors.hpp"

namespace densemap {

const AnnotationFrame* DotAnnotations::find_frame(std::int64_t frame_id) const {
    auto it = std::lower_bound(frames.begin(), frames.end(), frame_id,
                               [](const AnnotationFrame& f, std::int64_t id) {
                                   return f.frame_id < id;
                               });
    if (it == frames.end() || it->frame_id != frame_id) return nullptr;
    return &*it;
}

const AnnotationFrame& DotAnnotations::frame_or_throw(std::int64_t frame_id) const {
    const AnnotationFrame* f = find_frame(frame_id);
    if (!f)
        throw NotFoundError("annotations: no frame with id " +
                            std::to_string(frame_id));
    return *f;
}

void validate_and_sort(DotAnnotations& ann) {
    if (ann.width <= 0 || ann.height <= 0)
        throw ValidationError("annotations: frame dimensions must be positive, got " +
                              std::to_string(ann.width) + "x" +
                              std::to_string(ann.height));
    std::stable_sort(ann.frames.begin(), ann.frames.end(),
                     [](const AnnotationFrame& a, const AnnotationFrame& b) {
                         return a.frame_id < b.frame_id;
                     });
    for (std::size_t i = 1; i < ann.frames.size(); ++i)
        if (ann.frames[i].frame_id == ann.frames[i - 1].frame_id)
            throw ValidationError("annotations: duplicate frame id " +
                                  std::to_string(ann.frames[i].frame_id));
    for (const AnnotationFrame& f : ann.frames) {
        if (f.track_ids && f.track_ids->size() != f.points.size())
            throw ValidationError(
                "annotations: frame " + std::to_string(f.frame_id) + " has " +
                std::to_string(f.points.size()) + " points but " +
                std::to_string(f.track_ids->size()) + " track_ids");
        for (std::size_t i = 0; i < f.points.size(); ++i) {
            const Point2& p = f.points[i];
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 ||
                p.x >= ann.width || p.y < 0.0 || p.y >= ann.height) {
                std::ostringstream os;
                os << "annotations: frame " << f.frame_id << " point " << i << " ("
                   << p.x << ", " << p.y << ") outside " << ann.width << "x"
                   << ann.height << " frame";
                throw ValidationError(os.str());
            }
        }
    }
}

DotAnnotations parse_annotations_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("annotations: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("width") || !j.contains("height") ||
        !j.contains("frames") || !j["frames"].is_array())
        throw FormatError(
            "annotations: expected {\"width\", \"height\", \"frames\":[...]}");

    DotAnnotations ann;
    ann.width = j["width"].get<int>();
    ann.height = j["height"].get<int>();
    for (const auto& jf : j["frames"]) {
        if (!jf.is_object() || !jf.contains("id") || !jf.contains("points"))
            throw FormatError("annotations: each frame needs \"id\" and \"points\"");
        AnnotationFrame f;
        f.frame_id = jf["id"].get<std::int64_t>();
        for (const auto& jp : jf["points"]) {
            if (!jp.is_array() || jp.size() != 2)
                throw FormatError("annotations: points must be [x,y] pairs (frame " +
                                  std::to_string(f.frame_id) + ")");
            f.points.push_back({jp[0].get<double>(), jp[1].get<double>()});
        }
        if (jf.contains("track_ids")) {
            std::vector<std::int64_t> ids;
            for (const auto& ji : jf["track_ids"]) ids.push_back(ji.get<std::int64_t>());
            f.track_ids = std::move(ids);
        }
        ann.frames.push_back(std::move(f));
    }
    validate_and_sort(ann);
    return ann;
}

DotAnnotations parse_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("annotations: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_annotations_json(ss.str());
}

std::string annotations_to_json(const DotAnnotations& ann) {
    nlohmann::json j;
    j["width"] = ann.width;
    j["height"] = ann.height;
    j["frames"] = nlohmann::json::array();
    for (const AnnotationFrame& f : ann.frames) {
        nlohmann::json jf;
        jf["id"] = f.frame_id;
        jf["points"] = nlohmann::json::array();
        for (const Point2& p : f.points)
            jf["points"].push_back(nlohmann::json::array({p.x, p.y}));
        if (f.track_ids) jf["track_ids"] = *f.track_ids;
        j["frames"].push_back(std::move(jf));
    }
    return j.dump(2);
}

void write_annotations(const DotAnnotations& ann, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("annotations: cannot open " + path + " for writing");
    out << annotations_to_json(ann) << "\n";
    if (!out) throw IoError("annotations: write failure on " + path);
}

} // namespace densemap
