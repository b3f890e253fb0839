#include "densemap/perspective.hpp"

#include "densemap/errors.hpp"

namespace densemap {

PerspectiveMap PerspectiveMap::constant(int width, int height, double value) {
    if (width <= 0 || height <= 0)
        throw ValidationError("perspective map: dimensions must be positive");
    if (!(value > 0.0))
        throw ValidationError("perspective map: scale must be > 0");
    PerspectiveMap m;
    m.width = width;
    m.height = height;
    m.scale.assign(static_cast<std::size_t>(width) * height, value);
    return m;
}

PerspectiveMap PerspectiveMap::linear_ramp(int width, int height, double top_scale,
                                           double bottom_scale) {
    if (width <= 0 || height <= 0)
        throw ValidationError("perspective map: dimensions must be positive");
    if (!(top_scale > 0.0) || !(bottom_scale > 0.0))
        throw ValidationError("perspective map: scales must be > 0");
    PerspectiveMap m;
    m.width = width;
    m.height = height;
    m.scale.resize(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const double t = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
        const double s = top_scale + t * (bottom_scale - top_scale);
        for (int x = 0; x < width; ++x)
            m.scale[static_cast<std::size_t>(y) * width + x] = s;
    }
    return m;
}

} // namespace densemap
