#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "densemap/geometry.hpp"

namespace densemap {

/// 2D Gaussian mixture fitted by EM.
struct GmmParams {
    int k = 0;
    std::vector<Point2> means;
    // Per-component symmetric 2x2 covariances as (xx, xy, yy).
    std::vector<std::array<double, 3>> covariances;
    std::vector<double> mixing; // sums to 1, each > 0
    double log_likelihood = 0.0;
    int iterations = 0;
};

struct GmmOptions {
    double init_sigma = 2.0;        // isotropic init covariance = init_sigma^2
    double covariance_floor = 0.25; // eigenvalue floor, cells^2
    double tolerance = 1e-6;        // stop when log-likelihood gain drops below
    int max_iterations = 200;
};

/// Weighted EM: integer sample_weights act as replication counts, implemented
/// as weighted sufficient statistics (mathematically identical to literally
/// repeating the samples). Means are initialized by farthest-point traversal
/// of the distinct sample locations, seeded; the fit is deterministic given
/// the seed. Throws ValidationError when K exceeds the number of distinct
/// locations or weights are invalid.
GmmParams fit_gmm(const std::vector<Point2>& samples,
                  const std::vector<int>& sample_weights, int k,
                  std::uint64_t seed, const GmmOptions& options = {});

/// Farthest-point selection over distinct locations (exposed for reuse by
/// k-means and by test oracles): picks a seeded random start, then repeatedly
/// the location with maximal min-distance to the chosen set, ties broken by
/// lowest (row, col).
std::vector<Point2> farthest_point_init(const std::vector<Point2>& distinct,
                                        int k, std::uint64_t seed);

} // namespace densemap
