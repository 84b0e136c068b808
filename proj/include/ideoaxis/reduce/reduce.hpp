#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ideoaxis::reduce {

enum class PointKind { SPEAKER, ANCHOR_PRO, ANCHOR_CON, SEED_SENTENCE };

std::string to_string(PointKind kind);
PointKind point_kind_from_string(const std::string& text);

enum class Method { PCA, UMAP };

std::string to_string(Method method);                    // "pca" / "umap"
Method method_from_string(const std::string& text);      // accepts either case

// High-dimensional input to a joint 2D fit. Anchors ride along with the
// speakers so both end up in the same reduced space.
struct InputPoint {
    std::string id;
    PointKind kind = PointKind::SPEAKER;
    std::optional<std::string> party;
    std::vector<double> values;
};

struct PlanarPoint {
    std::string id;
    PointKind kind = PointKind::SPEAKER;
    std::optional<std::string> party;
    double x = 0.0;
    double y = 0.0;

    bool operator==(const PlanarPoint&) const = default;
};

// Neighborhood-embedding knobs, recorded verbatim in output metadata. The
// (a, b) pair is the low-dimensional similarity curve corresponding to the
// default min_dist = 0.1.
struct UmapParams {
    int n_neighbors = 15;
    double min_dist = 0.1;
    double a = 1.5769434603113077;
    double b = 0.8950608781227859;
    int n_epochs = 300;
    double learning_rate = 1.0;
    int negative_samples = 5;

    bool operator==(const UmapParams&) const = default;
};

struct ReduceResult {
    std::vector<PlanarPoint> points;
    Method method = Method::PCA;
    std::uint64_t seed = 0;
    UmapParams umap;  // meaningful for the UMAP path; recorded regardless
};

// Joint 2D reduction of all inputs.
//
// PCA: center, project onto the top two principal directions; the sign of
// each direction is fixed so its largest-magnitude loading is positive,
// making results bit-stable across runs and platforms. Zero-variance data
// is an error.
//
// UMAP: k-nearest-neighbor fuzzy graph + seeded stochastic layout descent;
// deterministic for a fixed seed, but seed-sensitive by nature.
ReduceResult reduce_2d(const std::vector<InputPoint>& inputs, Method method, std::uint64_t seed,
                       const UmapParams& params = {});

}  // namespace ideoaxis::reduce
