#include "densemap/image.hpp"

#include <cmath>
#include <fstream>

#include "densemap/errors.hpp"

namespace densemap {

GrayImage GrayImage::zeros(int width, int height) {
    if (width <= 0 || height <= 0)
        throw ValidationError("image: dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, 0.0);
    return img;
}

namespace {

// Read one whitespace-delimited token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

} // namespace

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("pgm: cannot open " + path);

    const std::string magic = next_token(in);
    if (magic != "P5") throw FormatError("pgm: " + path + " is not binary PGM (P5)");
    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(next_token(in));
        height = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw FormatError("pgm: unparsable header in " + path);
    }
    if (width <= 0 || height <= 0)
        throw FormatError("pgm: bad dimensions in " + path);
    if (maxval != 255)
        throw FormatError("pgm: only 8-bit (maxval 255) supported, " + path +
                          " has maxval " + std::to_string(maxval));

    GrayImage img = GrayImage::zeros(width, height);
    std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw FormatError("pgm: truncated payload in " + path + " (expected " +
                          std::to_string(bytes.size()) + " bytes, got " +
                          std::to_string(in.gcount()) + ")");
    for (std::size_t i = 0; i < bytes.size(); ++i)
        img.pixels[i] = bytes[i] / 255.0;
    return img;
}

void write_pgm(const GrayImage& image, const std::string& path) {
    if (image.width <= 0 || image.height <= 0)
        throw ValidationError("pgm: refusing to write an empty image");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("pgm: cannot open " + path + " for writing");
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    std::vector<unsigned char> bytes(image.pixels.size());
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        double v = image.pixels[i];
        if (v < 0.0) v = 0.0;
        if (v > 1.0) v = 1.0;
        bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("pgm: write failure on " + path);
}

} // namespace densemap
