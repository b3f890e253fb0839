#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densemap/geometry.hpp"

namespace densemap {

/// Per-frame point annotations (object centers), optionally with persistent
/// trajectory identities.
struct AnnotationFrame {
    std::int64_t frame_id = 0;
    std::vector<Point2> points;
    std::optional<std::vector<std::int64_t>> track_ids; // same length as points
};

struct DotAnnotations {
    int width = 0;  // frame dimensions the points live in
    int height = 0;
    std::vector<AnnotationFrame> frames; // sorted by frame_id, ids unique

    const AnnotationFrame* find_frame(std::int64_t frame_id) const;
    /// Like find_frame but throws NotFoundError when the id is absent.
    const AnnotationFrame& frame_or_throw(std::int64_t frame_id) const;
};

/// Parse the UTF-8 JSON annotation format:
///   {"width":int,"height":int,
///    "frames":[{"id":int,"points":[[x,y],...],"track_ids":[int,...]?}]}
/// Frames are returned sorted by id; point order within a frame is preserved.
/// Duplicate ids, out-of-bounds points and track_ids length mismatches are
/// rejected with a diagnostic naming the offender.
DotAnnotations parse_annotations(const std::string& path);
DotAnnotations parse_annotations_json(const std::string& text);

void write_annotations(const DotAnnotations& ann, const std::string& path);
std::string annotations_to_json(const DotAnnotations& ann);

/// Validate invariants (bounds, id ordering, track_ids length) and sort
/// frames by id; used by the parser and by code that builds annotations.
void validate_and_sort(DotAnnotations& ann);

} // namespace densemap
