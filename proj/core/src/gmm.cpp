#include "densemap/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "densemap/errors.hpp"
#include "densemap/random.hpp"

namespace densemap {

namespace {

bool lex_less(const Point2& a, const Point2& b) {
    if (a.y != b.y) return a.y < b.y; // row first
    return a.x < b.x;
}

// Clamp the eigenvalues of a symmetric 2x2 (xx, xy, yy) to at least `floor`.
std::array<double, 3> floor_eigenvalues(std::array<double, 3> cov, double floor) {
    const double xx = cov[0], xy = cov[1], yy = cov[2];
    const double tr = xx + yy;
    const double det = xx * yy - xy * xy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    double l1 = tr / 2.0 + disc;
    double l2 = tr / 2.0 - disc;
    if (l1 >= floor && l2 >= floor) return cov;

    // Eigenvector for l1.
    double vx, vy;
    if (std::abs(xy) > 1e-300) {
        vx = l1 - yy;
        vy = xy;
    } else {
        vx = xx >= yy ? 1.0 : 0.0;
        vy = xx >= yy ? 0.0 : 1.0;
    }
    const double norm = std::hypot(vx, vy);
    if (norm > 0.0) {
        vx /= norm;
        vy /= norm;
    } else {
        vx = 1.0;
        vy = 0.0;
    }
    l1 = std::max(l1, floor);
    l2 = std::max(l2, floor);
    // Reassemble l1*v*v^T + l2*u*u^T with u perpendicular to v.
    const double ux = -vy, uy = vx;
    return {l1 * vx * vx + l2 * ux * ux, l1 * vx * vy + l2 * ux * uy,
            l1 * vy * vy + l2 * uy * uy};
}

} // namespace

std::vector<Point2> farthest_point_init(const std::vector<Point2>& distinct, int k,
                                        std::uint64_t seed) {
    if (k <= 0 || distinct.empty() || static_cast<std::size_t>(k) > distinct.size())
        throw ValidationError("farthest_point_init: need 1 <= k <= distinct points");

    // Canonical ordering makes the seeded pick independent of input order.
    std::vector<std::size_t> order(distinct.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return lex_less(distinct[a], distinct[b]);
    });

    Rng rng(seed);
    std::vector<Point2> chosen;
    chosen.push_back(
        distinct[order[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(order.size()) - 1))]]);

    std::vector<double> min_d2(distinct.size(), std::numeric_limits<double>::max());
    while (static_cast<int>(chosen.size()) < k) {
        const Point2& last = chosen.back();
        double best = -1.0;
        std::size_t best_idx = 0;
        for (std::size_t oi = 0; oi < order.size(); ++oi) {
            const std::size_t i = order[oi];
            min_d2[i] = std::min(min_d2[i], squared_distance(distinct[i], last));
            if (min_d2[i] > best) { // strict: ties keep the lowest (row, col)
                best = min_d2[i];
                best_idx = i;
            }
        }
        chosen.push_back(distinct[best_idx]);
    }
    return chosen;
}

GmmParams fit_gmm(const std::vector<Point2>& samples,
                  const std::vector<int>& sample_weights, int k, std::uint64_t seed,
                  const GmmOptions& options) {
    if (k < 1) throw ValidationError("gmm: k must be >= 1");
    if (samples.empty()) throw ValidationError("gmm: no samples");
    if (samples.size() != sample_weights.size())
        throw ValidationError("gmm: " + std::to_string(samples.size()) +
                              " samples vs " + std::to_string(sample_weights.size()) +
                              " weights");
    double total_weight = 0.0;
    for (int w : sample_weights) {
        if (w <= 0) throw ValidationError("gmm: weights must be positive integers");
        total_weight += w;
    }
    if (total_weight < k)
        throw ValidationError("gmm: total weight " + std::to_string(total_weight) +
                              " below k " + std::to_string(k));

    std::vector<Point2> distinct = samples;
    std::sort(distinct.begin(), distinct.end(), lex_less);
    distinct.erase(std::unique(distinct.begin(), distinct.end(),
                               [](const Point2& a, const Point2& b) {
                                   return a.x == b.x && a.y == b.y;
                               }),
                   distinct.end());
    if (static_cast<std::size_t>(k) > distinct.size())
        throw ValidationError("gmm: k " + std::to_string(k) + " exceeds " +
                              std::to_string(distinct.size()) +
                              " distinct sample locations");

    GmmParams params;
    params.k = k;
    params.means = farthest_point_init(distinct, k, seed);
    params.covariances.assign(
        k, {options.init_sigma * options.init_sigma, 0.0,
            options.init_sigma * options.init_sigma});
    params.mixing.assign(k, 1.0 / k);

    const std::size_t n = samples.size();
    std::vector<double> resp(n * static_cast<std::size_t>(k));
    double prev_ll = -std::numeric_limits<double>::max();

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        // E step.
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row_sum = 0.0;
            for (int c = 0; c < k; ++c) {
                const auto& cov = params.covariances[c];
                const double det = cov[0] * cov[2] - cov[1] * cov[1];
                const double inv_xx = cov[2] / det;
                const double inv_xy = -cov[1] / det;
                const double inv_yy = cov[0] / det;
                const double dx = samples[i].x - params.means[c].x;
                const double dy = samples[i].y - params.means[c].y;
                const double quad =
                    dx * (inv_xx * dx + inv_xy * dy) + dy * (inv_xy * dx + inv_yy * dy);
                const double pdf = std::exp(-0.5 * quad) /
                                   (6.283185307179586476925286766559 * std::sqrt(det));
                const double w = params.mixing[c] * pdf;
                resp[i * k + c] = w;
                row_sum += w;
            }
            if (row_sum <= 0.0) {
                // All components vanished at this sample; spread evenly.
                for (int c = 0; c < k; ++c) resp[i * k + c] = 1.0 / k;
                row_sum = std::numeric_limits<double>::min();
            } else {
                for (int c = 0; c < k; ++c) resp[i * k + c] /= row_sum;
            }
            ll += sample_weights[i] * std::log(row_sum);
        }

        // M step with weighted sufficient statistics.
        for (int c = 0; c < k; ++c) {
            double nk = 0.0, mx = 0.0, my = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double wr = sample_weights[i] * resp[i * k + c];
                nk += wr;
                mx += wr * samples[i].x;
                my += wr * samples[i].y;
            }
            if (nk < 1e-12) {
                // Collapsed component: keep its mean, keep a tiny share.
                params.mixing[c] = 1e-12;
                continue;
            }
            mx /= nk;
            my /= nk;
            double sxx = 0.0, sxy = 0.0, syy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double wr = sample_weights[i] * resp[i * k + c];
                const double dx = samples[i].x - mx;
                const double dy = samples[i].y - my;
                sxx += wr * dx * dx;
                sxy += wr * dx * dy;
                syy += wr * dy * dy;
            }
            params.means[c] = {mx, my};
            params.covariances[c] = floor_eigenvalues(
                {sxx / nk, sxy / nk, syy / nk}, options.covariance_floor);
            params.mixing[c] = nk / total_weight;
        }
        double mix_sum = 0.0;
        for (double m : params.mixing) mix_sum += m;
        for (double& m : params.mixing) m /= mix_sum;

        params.log_likelihood = ll;
        params.iterations = iter;
        if (ll - prev_ll < options.tolerance && iter > 1) break;
        prev_ll = ll;
    }
    return params;
}

} // namespace densemap
