#include "densemap/roi.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "densemap/errors.hpp"
#include "densemap/raster_io.hpp"

namespace densemap {

RoiMask RoiMask::full(int width, int height) {
    if (width <= 0 || height <= 0)
        throw ValidationError("roi: dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    RoiMask m;
    m.width = width;
    m.height = height;
    m.inside.assign(static_cast<std::size_t>(width) * height, 1);
    return m;
}

std::size_t RoiMask::count_inside() const {
    return static_cast<std::size_t>(
        std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

RoiMask rasterize_roi(const std::vector<Point2>& polygon, int width, int height) {
    if (polygon.size() < 3)
        throw ValidationError("roi: polygon needs at least 3 vertices, got " +
                              std::to_string(polygon.size()));
    if (width <= 0 || height <= 0)
        throw ValidationError("roi: dimensions must be positive");

    RoiMask m;
    m.width = width;
    m.height = height;
    m.inside.assign(static_cast<std::size_t>(width) * height, 0);

    const std::size_t n = polygon.size();
    for (int iy = 0; iy < height; ++iy) {
        const double py = iy + 0.5;
        // Even-odd rule: collect x-crossings of the scanline through the
        // cell-center row, then test each center against the crossing count.
        std::vector<double> crossings;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2& a = polygon[i];
            const Point2& b = polygon[(i + 1) % n];
            if ((a.y <= py) == (b.y <= py)) continue; // no crossing
            const double t = (py - a.y) / (b.y - a.y);
            crossings.push_back(a.x + t * (b.x - a.x));
        }
        std::sort(crossings.begin(), crossings.end());
        for (int ix = 0; ix < width; ++ix) {
            const double px = ix + 0.5;
            const std::size_t below =
                std::lower_bound(crossings.begin(), crossings.end(), px) -
                crossings.begin();
            if (below % 2 == 1)
                m.inside[static_cast<std::size_t>(iy) * width + ix] = 1;
        }
    }
    return m;
}

RoiMask read_roi(const std::string& path, int width, int height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("roi: cannot open " + path);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    in.close();
    if (in.gcount() == 4 && magic[0] == 'D' && magic[1] == 'M' && magic[2] == 'F' &&
        magic[3] == '1') {
        const DensityMap raster = read_density_map(path);
        if (raster.width != width || raster.height != height)
            throw ValidationError("roi: raster is " + std::to_string(raster.width) +
                                  "x" + std::to_string(raster.height) +
                                  ", frame is " + std::to_string(width) + "x" +
                                  std::to_string(height));
        RoiMask m;
        m.width = width;
        m.height = height;
        m.inside.resize(raster.values.size());
        for (std::size_t i = 0; i < raster.values.size(); ++i)
            m.inside[i] = raster.values[i] > 0.5 ? 1 : 0;
        return m;
    }

    std::ifstream jin(path);
    if (!jin) throw IoError("roi: cannot open " + path);
    nlohmann::json j;
    try {
        jin >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("roi: " + path + " is neither DMF1 nor JSON: " + e.what());
    }
    if (!j.contains("roi") || !j["roi"].is_array())
        throw FormatError("roi: JSON file must contain a \"roi\" polygon array");
    std::vector<Point2> poly;
    for (const auto& v : j["roi"]) {
        if (!v.is_array() || v.size() != 2)
            throw FormatError("roi: polygon vertices must be [x,y] pairs");
        poly.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return rasterize_roi(poly, width, height);
}

} // namespace densemap
