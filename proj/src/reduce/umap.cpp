#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/reduce/reduce.hpp"

// Compact neighborhood-embedding layout: exact kNN graph, smoothed into a
// fuzzy membership graph (per-point rho/sigma calibration), symmetrized,
// then laid out by edge-sampled stochastic descent with negative sampling.
// All randomness flows from one mt19937_64 with explicit draws, so a fixed
// seed reproduces coordinates bit-for-bit on any platform.

namespace ideoaxis::reduce {

Eigen::MatrixXd pca_embed(const Eigen::MatrixXd& x);

namespace {

struct DirectedEdge {
    int from;
    int to;
    double weight;
};

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double clip4(double v) { return std::clamp(v, -4.0, 4.0); }

}  // namespace

Eigen::MatrixXd umap_embed(const Eigen::MatrixXd& x, std::uint64_t seed,
                           const UmapParams& params) {
    const int n = static_cast<int>(x.rows());
    const int k = std::clamp(params.n_neighbors, 2, n - 1);
    const double target = std::log2(static_cast<double>(k));

    Eigen::MatrixXd dist(n, n);
    for (int i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double d = (x.row(i) - x.row(j)).norm();
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }

    // k nearest neighbors per point (self excluded), nearest first.
    std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<int> order;
        order.reserve(static_cast<std::size_t>(n) - 1);
        for (int j = 0; j < n; ++j) {
            if (j != i) order.push_back(j);
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::tie(dist(i, a), a) < std::tie(dist(i, b), b);
        });
        order.resize(static_cast<std::size_t>(k));
        neighbors[static_cast<std::size_t>(i)] = std::move(order);
    }

    // Per-point calibration: rho = nearest positive distance, sigma solved
    // so the smoothed neighborhood has effective size log2(k).
    Eigen::MatrixXd membership = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = neighbors[static_cast<std::size_t>(i)];
        double rho = 0.0;
        for (int j : nbrs) {
            if (dist(i, j) > 0.0) {
                rho = dist(i, j);
                break;
            }
        }
        auto weight_sum = [&](double sigma) {
            double sum = 0.0;
            for (int j : nbrs) {
                const double gap = std::max(0.0, dist(i, j) - rho);
                sum += std::exp(-gap / sigma);
            }
            return sum;
        };
        double lo = 1e-12, hi = 1.0;
        for (int it = 0; it < 64 && weight_sum(hi) < target; ++it) hi *= 2.0;
        for (int it = 0; it < 64; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (weight_sum(mid) >= target) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        const double sigma = hi;
        for (int j : nbrs) {
            const double gap = std::max(0.0, dist(i, j) - rho);
            membership(i, j) = std::exp(-gap / sigma);
        }
    }

    // Fuzzy union: w = a + b - ab, kept as directed edges both ways.
    std::vector<DirectedEdge> edges;
    double w_max = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double a = membership(i, j);
            const double b = membership(j, i);
            const double w = a + b - a * b;
            if (w <= 0.0) continue;
            edges.push_back({i, j, w});
            edges.push_back({j, i, w});
            w_max = std::max(w_max, w);
        }
    }
    if (edges.empty()) {
        throw PreconditionError("neighborhood graph is empty; cannot embed");
    }

    std::mt19937_64 rng(seed);

    // Initial layout: principal-plane coordinates scaled into [-10, 10];
    // degenerate (zero variance) data falls back to a seeded random spread.
    Eigen::MatrixXd y(n, 2);
    try {
        y = pca_embed(x);
        const double extent = y.cwiseAbs().maxCoeff();
        if (extent > 0.0) y *= 10.0 / extent;
    } catch (const PreconditionError&) {
        for (int i = 0; i < n; ++i) {
            y(i, 0) = uniform01(rng) * 20.0 - 10.0;
            y(i, 1) = uniform01(rng) * 20.0 - 10.0;
        }
    }

    // Strong edges are sampled every few epochs, weak ones rarely.
    std::vector<double> epochs_per_sample(edges.size());
    std::vector<double> next_due(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        epochs_per_sample[e] = w_max / edges[e].weight;
        next_due[e] = epochs_per_sample[e];
    }

    const double a = params.a;
    const double b = params.b;
    for (int epoch = 1; epoch <= params.n_epochs; ++epoch) {
        const double alpha =
            params.learning_rate *
            (1.0 - static_cast<double>(epoch - 1) / static_cast<double>(params.n_epochs));
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (next_due[e] > static_cast<double>(epoch)) continue;
            next_due[e] += epochs_per_sample[e];
            const int i = edges[e].from;
            const int j = edges[e].to;

            double dx = y(i, 0) - y(j, 0);
            double dy = y(i, 1) - y(j, 1);
            double d2 = dx * dx + dy * dy;
            if (d2 > 0.0) {
                const double coeff =
                    (-2.0 * a * b * std::pow(d2, b - 1.0)) / (1.0 + a * std::pow(d2, b));
                y(i, 0) += alpha * clip4(coeff * dx);
                y(i, 1) += alpha * clip4(coeff * dy);
            }

            for (int s = 0; s < params.negative_samples; ++s) {
                const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
                if (p == i) continue;
                dx = y(i, 0) - y(p, 0);
                dy = y(i, 1) - y(p, 1);
                d2 = dx * dx + dy * dy;
                if (d2 > 0.0) {
                    const double coeff =
                        (2.0 * b) / ((0.001 + d2) * (1.0 + a * std::pow(d2, b)));
                    y(i, 0) += alpha * clip4(coeff * dx);
                    y(i, 1) += alpha * clip4(coeff * dy);
                } else {
                    y(i, 0) += alpha * 4.0;
                    y(i, 1) += alpha * 4.0;
                }
            }
        }
    }
    return y;
}

}  // namespace ideoaxis::reduce
