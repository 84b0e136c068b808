#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/topics/topics.hpp"

namespace ideoaxis::topics {

namespace {

double dist2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

// Platform-stable uniform in [0, 1); std::uniform_real_distribution draws an
// implementation-defined sequence.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<int> cluster_points(const std::vector<std::array<double, 2>>& points, int k,
                                std::uint64_t seed) {
    if (k < 1) throw PreconditionError("cluster count must be at least 1");
    const std::size_t n = points.size();
    if (n < static_cast<std::size_t>(k)) {
        throw PreconditionError("cannot form " + std::to_string(k) + " clusters from " +
                                std::to_string(n) + " points; rerun with k <= " +
                                std::to_string(n));
    }

    std::mt19937_64 rng(seed);
    const auto uk = static_cast<std::size_t>(k);

    // k-means++ seeding: subsequent centers drawn proportionally to the
    // squared distance from the nearest existing center.
    std::vector<std::array<double, 2>> centers;
    centers.reserve(uk);
    centers.push_back(points[rng() % n]);
    std::vector<double> d2(n);
    while (centers.size() < uk) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, dist2(points[i], c));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {  // all remaining mass on existing centers (identical points)
            centers.push_back(points[rng() % n]);
            continue;
        }
        const double target = uniform01(rng) * total;
        double acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= target) {
                pick = i;
                break;
            }
        }
        centers.push_back(points[pick]);
    }

    std::vector<int> labels(n, 0);
    const int max_iterations = 200;
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = (iter == 0);
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = dist2(points[i], centers[0]);
            for (std::size_t c = 1; c < uk; ++c) {
                const double d = dist2(points[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
        }

        std::vector<std::array<double, 2>> sums(uk, {0.0, 0.0});
        std::vector<int> counts(uk, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[labels[i]][0] += points[i][0];
            sums[labels[i]][1] += points[i][1];
            ++counts[labels[i]];
        }
        for (std::size_t c = 0; c < uk; ++c) {
            if (counts[c] > 0) {
                centers[c] = {sums[c][0] / counts[c], sums[c][1] / counts[c]};
            }
        }
        // An emptied cluster captures the point farthest from its own center.
        for (std::size_t c = 0; c < uk; ++c) {
            if (counts[c] > 0) continue;
            std::size_t farthest = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = dist2(points[i], centers[labels[i]]);
                if (d > far_d) {
                    far_d = d;
                    farthest = i;
                }
            }
            --counts[labels[farthest]];
            labels[farthest] = static_cast<int>(c);
            counts[c] = 1;
            centers[c] = points[farthest];
            changed = true;
        }
        if (!changed) break;
    }

    // Renumber by first occurrence so label 0 belongs to the earliest point.
    std::vector<int> remap(uk, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (remap[labels[i]] < 0) remap[labels[i]] = next++;
    }
    for (std::size_t c = 0; c < uk; ++c) {
        if (remap[c] < 0) remap[c] = next++;
    }
    for (std::size_t i = 0; i < n; ++i) labels[i] = remap[labels[i]];
    return labels;
}

}  // namespace ideoaxis::topics
