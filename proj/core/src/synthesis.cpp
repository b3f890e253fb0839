#include "densemap/synthesis.hpp"

#include <cmath>
#include <sstream>

#include "densemap/errors.hpp"

namespace densemap {

void SynthesisConfig::validate() const {
    if (!(sigma > 0.0))
        throw ValidationError("synthesis: sigma must be > 0");
    if (!(truncation_radius >= 3.0))
        throw ValidationError("synthesis: truncation_radius must be >= 3");
    if (!(reference_scale > 0.0))
        throw ValidationError("synthesis: reference_scale must be > 0");
    if ((mode == SigmaMode::PerspectiveScaled) != perspective.has_value())
        throw ValidationError(
            "synthesis: perspective map must be present iff mode is "
            "perspective-scaled");
}

double effective_sigma(const SynthesisConfig& cfg, const Point2& at) {
    cfg.validate();
    if (cfg.mode == SigmaMode::Fixed) return cfg.sigma;
    const PerspectiveMap& persp = *cfg.perspective;
    const int cx = containing_cell_x(at.x);
    const int cy = containing_cell_y(at.y);
    if (cx < 0 || cx >= persp.width || cy < 0 || cy >= persp.height) {
        std::ostringstream os;
        os << "synthesis: point (" << at.x << ", " << at.y
           << ") outside perspective map " << persp.width << "x" << persp.height;
        throw ValidationError(os.str());
    }
    return cfg.sigma * persp.at(cx, cy) / cfg.reference_scale;
}

DensityMap synthesize_density(const DotAnnotations& ann, std::int64_t frame_id,
                              const SynthesisConfig& cfg, int width, int height) {
    cfg.validate();
    const AnnotationFrame& frame = ann.frame_or_throw(frame_id);

    DensityMap map = DensityMap::zeros(width, height);
    for (std::size_t di = 0; di < frame.points.size(); ++di) {
        const Point2& dot = frame.points[di];
        if (!(dot.x >= 0.0 && dot.x < width && dot.y >= 0.0 && dot.y < height)) {
            std::ostringstream os;
            os << "synthesis: frame " << frame_id << " dot " << di << " (" << dot.x
               << ", " << dot.y << ") outside " << width << "x" << height << " frame";
            throw ValidationError(os.str());
        }
        const double sigma = effective_sigma(cfg, dot);
        const double radius = cfg.truncation_radius * sigma;
        const double r2 = radius * radius;
        const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
        const double amplitude = gaussian_peak(sigma);

        // Cell centers are at half-integers; the kernel touches cells whose
        // centers lie within `radius` of the dot.
        const int x0 = std::max(0, containing_cell_x(dot.x - radius));
        const int x1 = std::min(width - 1, containing_cell_x(dot.x + radius));
        const int y0 = std::max(0, containing_cell_y(dot.y - radius));
        const int y1 = std::min(height - 1, containing_cell_y(dot.y + radius));

        if (cfg.normalization == DotNormalization::PerDotRenormalize) {
            double kernel_sum = 0.0;
            for (int y = y0; y <= y1; ++y) {
                const double dy = (y + 0.5) - dot.y;
                for (int x = x0; x <= x1; ++x) {
                    const double dx = (x + 0.5) - dot.x;
                    const double d2 = dx * dx + dy * dy;
                    if (d2 <= r2) kernel_sum += std::exp(-d2 * inv_two_sigma2);
                }
            }
            if (kernel_sum <= 0.0) continue; // dot's whole kernel fell outside
            const double scale = 1.0 / kernel_sum;
            for (int y = y0; y <= y1; ++y) {
                const double dy = (y + 0.5) - dot.y;
                for (int x = x0; x <= x1; ++x) {
                    const double dx = (x + 0.5) - dot.x;
                    const double d2 = dx * dx + dy * dy;
                    if (d2 <= r2) map.at(x, y) += scale * std::exp(-d2 * inv_two_sigma2);
                }
            }
        } else {
            for (int y = y0; y <= y1; ++y) {
                const double dy = (y + 0.5) - dot.y;
                for (int x = x0; x <= x1; ++x) {
                    const double dx = (x + 0.5) - dot.x;
                    const double d2 = dx * dx + dy * dy;
                    if (d2 <= r2)
                        map.at(x, y) += amplitude * std::exp(-d2 * inv_two_sigma2);
                }
            }
        }
    }
    return map;
}

std::int64_t ground_truth_count(const DotAnnotations& ann, std::int64_t frame_id,
                                const RoiMask& roi) {
    const AnnotationFrame& frame = ann.frame_or_throw(frame_id);
    std::int64_t count = 0;
    for (const Point2& p : frame.points) {
        const int cx = containing_cell_x(p.x);
        const int cy = containing_cell_y(p.y);
        if (cx >= 0 && cx < roi.width && cy >= 0 && cy < roi.height && roi.at(cx, cy))
            ++count;
    }
    return count;
}

} // namespace densemap
