#pragma once

#include <cmath>
#include <cstdint>

namespace densemap {

/// A point in frame coordinates, pixels. x grows along columns, y grows
/// downward along rows. Grid cell (ix, iy) covers [ix, ix+1) x [iy, iy+1);
/// its center is (ix + 0.5, iy + 0.5). A point with 0 <= x < width and
/// 0 <= y < height therefore always has a containing cell.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double squared_distance(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Center of grid cell (ix, iy).
inline Point2 cell_center(int ix, int iy) {
    return {static_cast<double>(ix) + 0.5, static_cast<double>(iy) + 0.5};
}

/// Cell containing a point; valid for 0 <= x < width, 0 <= y < height.
inline int containing_cell_x(double x) { return static_cast<int>(std::floor(x)); }
inline int containing_cell_y(double y) { return static_cast<int>(std::floor(y)); }

/// Symmetric (edge-inclusive) mirror of an index into [0, n).
/// ... img[1], img[0] | img[0], img[1], ... at each border.
inline int mirror_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

} // namespace densemap
