#include "densemap/ridge.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <Eigen/Dense>

#include "densemap/errors.hpp"
#include "densemap/geometry.hpp"

namespace densemap {

void RidgeModel::validate() const {
    if (patch_size <= 0 || patch_size % 2 == 0)
        throw ValidationError("ridge: patch_size must be odd and positive, got " +
                              std::to_string(patch_size));
    if (ridge_lambda < 0.0)
        throw ValidationError("ridge: lambda must be >= 0");
    const std::size_t expected =
        static_cast<std::size_t>(patch_size) * patch_size + 1;
    if (weights.size() != expected)
        throw ValidationError("ridge: expected " + std::to_string(expected) +
                              " weights, got " + std::to_string(weights.size()));
    for (double w : weights)
        if (!std::isfinite(w)) throw ValidationError("ridge: non-finite weight");
}

std::vector<double> extract_patch(const GrayImage& image, const Point2& center,
                                  int patch_size) {
    if (patch_size <= 0 || patch_size % 2 == 0)
        throw ValidationError("ridge: patch_size must be odd and positive, got " +
                              std::to_string(patch_size));
    const int r = patch_size / 2;
    const int cx = containing_cell_x(center.x);
    const int cy = containing_cell_y(center.y);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(patch_size) * patch_size + 1);
    for (int dy = -r; dy <= r; ++dy) {
        const int y = mirror_index(cy + dy, image.height);
        for (int dx = -r; dx <= r; ++dx) {
            const int x = mirror_index(cx + dx, image.width);
            out.push_back(image.at(x, y));
        }
    }
    out.push_back(1.0);
    return out;
}

namespace {

// Solve (X^T X + lambda*I')w = X^T y given the accumulated normal equations.
// I' is the identity with a zero at the bias coordinate (last).
std::vector<double> solve_normal_equations(Eigen::MatrixXd xtx, Eigen::VectorXd xty,
                                           double lambda) {
    const Eigen::Index d = xtx.rows();
    for (Eigen::Index i = 0; i + 1 < d; ++i) xtx(i, i) += lambda;

    Eigen::VectorXd w;
    if (lambda > 0.0) {
        w = xtx.ldlt().solve(xty);
    } else {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xtx);
        if (qr.rank() < d)
            throw SingularityError(
                "ridge: design matrix is rank-deficient and lambda = 0 (rank " +
                std::to_string(qr.rank()) + " of " + std::to_string(d) + ")");
        w = qr.solve(xty);
    }

    const double rhs_norm = xty.norm();
    const double residual = (xtx * w - xty).norm();
    if (rhs_norm > 0.0 && residual > 1e-8 * rhs_norm)
        throw SingularityError("ridge: normal-equation solve residual " +
                               std::to_string(residual / rhs_norm) +
                               " exceeds 1e-8 relative tolerance");
    return {w.data(), w.data() + w.size()};
}

} // namespace

RidgeModel train_ridge(const std::vector<std::vector<double>>& features,
                       const std::vector<double>& targets, double ridge_lambda) {
    if (features.empty())
        throw ValidationError("ridge: need at least one training sample");
    if (features.size() != targets.size())
        throw ValidationError("ridge: " + std::to_string(features.size()) +
                              " feature rows vs " + std::to_string(targets.size()) +
                              " targets");
    if (ridge_lambda < 0.0) throw ValidationError("ridge: lambda must be >= 0");
    const std::size_t d = features[0].size();
    for (std::size_t i = 0; i < features.size(); ++i)
        if (features[i].size() != d)
            throw ValidationError("ridge: sample " + std::to_string(i) + " has " +
                                  std::to_string(features[i].size()) +
                                  " features, expected " + std::to_string(d));

    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd x(d);
    for (std::size_t i = 0; i < features.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) x(static_cast<Eigen::Index>(k)) = features[i][k];
        xtx.selfadjointView<Eigen::Lower>().rankUpdate(x);
        xty += targets[i] * x;
    }
    xtx = xtx.selfadjointView<Eigen::Lower>();

    RidgeModel model;
    // Infer the patch size when the feature count is patch-shaped; generic
    // feature vectors get patch_size 0 and can only be used for their weights.
    model.patch_size = static_cast<int>(std::lround(std::sqrt(double(d - 1))));
    if (static_cast<std::size_t>(model.patch_size) * model.patch_size + 1 != d ||
        model.patch_size % 2 == 0)
        model.patch_size = 0;
    model.ridge_lambda = ridge_lambda;
    model.weights = solve_normal_equations(std::move(xtx), std::move(xty), ridge_lambda);
    return model;
}

RidgeModel train_ridge_on_frames(const std::vector<GrayImage>& images,
                                 const std::vector<DensityMap>& targets,
                                 const RoiMask& roi, int patch_size,
                                 double ridge_lambda, int stride) {
    if (patch_size <= 0 || patch_size % 2 == 0)
        throw ValidationError("ridge: patch_size must be odd and positive");
    if (images.empty() || images.size() != targets.size())
        throw ValidationError("ridge: need matching, nonempty image/target lists");
    if (stride < 1) throw ValidationError("ridge: stride must be >= 1");

    const std::size_t d = static_cast<std::size_t>(patch_size) * patch_size + 1;
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd x(d);

    for (std::size_t f = 0; f < images.size(); ++f) {
        const GrayImage& img = images[f];
        const DensityMap& gt = targets[f];
        if (img.width != roi.width || img.height != roi.height ||
            gt.width != roi.width || gt.height != roi.height)
            throw ValidationError("ridge: frame " + std::to_string(f) +
                                  " dimensions do not match the ROI");
        for (int y = 0; y < img.height; y += stride)
            for (int px = 0; px < img.width; px += stride) {
                if (!roi.at(px, y)) continue;
                const std::vector<double> feat =
                    extract_patch(img, cell_center(px, y), patch_size);
                for (std::size_t k = 0; k < d; ++k)
                    x(static_cast<Eigen::Index>(k)) = feat[k];
                xtx.selfadjointView<Eigen::Lower>().rankUpdate(x);
                xty += gt.at(px, y) * x;
            }
    }
    xtx = xtx.selfadjointView<Eigen::Lower>();

    RidgeModel model;
    model.patch_size = patch_size;
    model.ridge_lambda = ridge_lambda;
    model.weights = solve_normal_equations(std::move(xtx), std::move(xty), ridge_lambda);
    return model;
}

DensityMap predict_density(const RidgeModel& model, const GrayImage& image,
                           const RoiMask& roi) {
    model.validate();
    if (image.width != roi.width || image.height != roi.height)
        throw ValidationError("ridge: image and ROI dimensions differ");

    std::vector<double> values(static_cast<std::size_t>(image.width) * image.height,
                               0.0);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            if (!roi.at(x, y)) continue;
            const std::vector<double> feat =
                extract_patch(image, cell_center(x, y), model.patch_size);
            double acc = 0.0;
            for (std::size_t k = 0; k < feat.size(); ++k)
                acc += model.weights[k] * feat[k];
            values[static_cast<std::size_t>(y) * image.width + x] = acc;
        }
    DensityMap out = DensityMap::prediction_map(image.width, image.height,
                                                std::move(values));
    out.roi = roi;
    return out;
}

namespace {

constexpr char kModelMagic[4] = {'R', 'R', 'M', '1'};

std::uint32_t load_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t load_u64le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void store_u32le(std::uint32_t v, unsigned char* p) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
}

void store_u64le(std::uint64_t v, unsigned char* p) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
}

} // namespace

RidgeModel read_ridge_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("rrm1: cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kModelMagic, 4) != 0)
        throw FormatError("rrm1: bad magic at byte offset 0 in " + path);
    const std::uint32_t patch = load_u32le(bytes.data() + 4);
    double lambda;
    const std::uint64_t lam_bits = load_u64le(bytes.data() + 8);
    std::memcpy(&lambda, &lam_bits, 8);

    const std::size_t n = static_cast<std::size_t>(patch) * patch + 1;
    if (bytes.size() != 16 + n * 8)
        throw FormatError("rrm1: payload size mismatch in " + path + ": expected " +
                          std::to_string(n) + " weights");
    RidgeModel model;
    model.patch_size = static_cast<int>(patch);
    model.ridge_lambda = lambda;
    model.weights.resize(n);
    const unsigned char* p = bytes.data() + 16;
    for (std::size_t i = 0; i < n; ++i, p += 8) {
        const std::uint64_t u = load_u64le(p);
        std::memcpy(&model.weights[i], &u, 8);
    }
    model.validate();
    return model;
}

void write_ridge_model(const RidgeModel& model, const std::string& path) {
    model.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("rrm1: cannot open " + path + " for writing");
    unsigned char header[16];
    std::memcpy(header, kModelMagic, 4);
    store_u32le(static_cast<std::uint32_t>(model.patch_size), header + 4);
    std::uint64_t lam_bits;
    std::memcpy(&lam_bits, &model.ridge_lambda, 8);
    store_u64le(lam_bits, header + 8);
    out.write(reinterpret_cast<const char*>(header), 16);
    std::vector<unsigned char> payload(model.weights.size() * 8);
    unsigned char* p = payload.data();
    for (double w : model.weights) {
        std::uint64_t u;
        std::memcpy(&u, &w, 8);
        store_u64le(u, p);
        p += 8;
    }
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    out.flush();
    if (!out) throw IoError("rrm1: write failure on " + path);
}

} // namespace densemap
