#include "densemap/raster_io.hpp"

#include <cstring>
#include <fstream>

#include "densemap/errors.hpp"

namespace densemap {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'F', '1'};

std::uint32_t load_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32le(std::uint32_t v, unsigned char* p) {
    p[0] = static_cast<unsigned char>(v & 0xFF);
    p[1] = static_cast<unsigned char>((v >> 8) & 0xFF);
    p[2] = static_cast<unsigned char>((v >> 16) & 0xFF);
    p[3] = static_cast<unsigned char>((v >> 24) & 0xFF);
}

struct RawRaster {
    int width = 0;
    int height = 0;
    std::vector<double> values;
};

RawRaster read_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("dmf1: cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("dmf1: read failure on " + path);

    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError("dmf1: bad magic at byte offset 0 in " + path +
                          " (expected 'DMF1')");
    if (bytes.size() < 12)
        throw FormatError("dmf1: truncated header at byte offset " +
                          std::to_string(bytes.size()) + " in " + path +
                          " (need 12 header bytes)");

    const std::uint32_t w = load_u32le(bytes.data() + 4);
    const std::uint32_t h = load_u32le(bytes.data() + 8);
    if (w == 0)
        throw FormatError("dmf1: zero width at byte offset 4 in " + path);
    if (h == 0)
        throw FormatError("dmf1: zero height at byte offset 8 in " + path);

    const std::size_t expected = static_cast<std::size_t>(w) * h * 4;
    const std::size_t got = bytes.size() - 12;
    if (got != expected)
        throw FormatError("dmf1: payload size mismatch in " + path + ": header says " +
                          std::to_string(w) + "x" + std::to_string(h) + " (" +
                          std::to_string(expected) + " bytes), file carries " +
                          std::to_string(got));

    RawRaster r;
    r.width = static_cast<int>(w);
    r.height = static_cast<int>(h);
    r.values.resize(static_cast<std::size_t>(w) * h);
    const unsigned char* p = bytes.data() + 12;
    for (std::size_t i = 0; i < r.values.size(); ++i, p += 4) {
        std::uint32_t u = load_u32le(p);
        float f;
        std::memcpy(&f, &u, 4);
        r.values[i] = static_cast<double>(f);
    }
    return r;
}

void write_raw(int width, int height, const std::vector<double>& values,
               const std::string& path) {
    if (width <= 0 || height <= 0)
        throw ValidationError("dmf1: refusing to write a raster with dimensions " +
                              std::to_string(width) + "x" + std::to_string(height));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("dmf1: cannot open " + path + " for writing");

    unsigned char header[12];
    std::memcpy(header, kMagic, 4);
    store_u32le(static_cast<std::uint32_t>(width), header + 4);
    store_u32le(static_cast<std::uint32_t>(height), header + 8);
    out.write(reinterpret_cast<const char*>(header), 12);

    std::vector<unsigned char> payload(values.size() * 4);
    unsigned char* p = payload.data();
    for (double v : values) {
        const float f = static_cast<float>(v);
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        store_u32le(u, p);
        p += 4;
    }
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    out.flush();
    if (!out) throw IoError("dmf1: write failure on " + path);
}

} // namespace

DensityMap read_density_map(const std::string& path) {
    RawRaster r = read_raw(path);
    bool has_negative = false;
    for (double v : r.values)
        if (v < 0.0) {
            has_negative = true;
            break;
        }
    return has_negative
               ? DensityMap::prediction_map(r.width, r.height, std::move(r.values))
               : DensityMap::ground_truth(r.width, r.height, std::move(r.values));
}

PerspectiveMap read_perspective_map(const std::string& path) {
    RawRaster r = read_raw(path);
    for (std::size_t i = 0; i < r.values.size(); ++i)
        if (!(r.values[i] > 0.0))
            throw ValidationError("perspective map: non-positive scale at index " +
                                  std::to_string(i) + " in " + path);
    PerspectiveMap m;
    m.width = r.width;
    m.height = r.height;
    m.scale = std::move(r.values);
    return m;
}

void write_density_map(const DensityMap& map, const std::string& path) {
    write_raw(map.width, map.height, map.values, path);
}

void write_perspective_map(const PerspectiveMap& map, const std::string& path) {
    write_raw(map.width, map.height, map.scale, path);
}

} // namespace densemap
