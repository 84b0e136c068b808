#include "ideoaxis/reduce/reduce.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ideoaxis/common/error.hpp"

namespace ideoaxis::reduce {

namespace {

Eigen::MatrixXd pack_inputs(const std::vector<InputPoint>& inputs) {
    if (inputs.size() < 3) {
        throw PreconditionError("2D reduction needs at least 3 points, got " +
                                std::to_string(inputs.size()));
    }
    const std::size_t d = inputs[0].values.size();
    if (d < 2) throw PreconditionError("2D reduction needs dimension >= 2");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(inputs.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].values.size() != d) {
            throw DimensionError("point \"" + inputs[i].id + "\" has dimension " +
                                 std::to_string(inputs[i].values.size()) + ", expected " +
                                 std::to_string(d));
        }
        for (std::size_t j = 0; j < d; ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inputs[i].values[j];
        }
    }
    return x;
}

std::vector<PlanarPoint> to_planar(const std::vector<InputPoint>& inputs,
                                   const Eigen::MatrixXd& coords) {
    std::vector<PlanarPoint> points;
    points.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (!std::isfinite(coords(r, 0)) || !std::isfinite(coords(r, 1))) {
            throw PreconditionError("reduction produced a non-finite coordinate for \"" +
                                    inputs[i].id + "\"");
        }
        points.push_back(PlanarPoint{inputs[i].id, inputs[i].kind, inputs[i].party,
                                     coords(r, 0), coords(r, 1)});
    }
    return points;
}

}  // namespace

std::string to_string(PointKind kind) {
    switch (kind) {
        case PointKind::SPEAKER: return "SPEAKER";
        case PointKind::ANCHOR_PRO: return "ANCHOR_PRO";
        case PointKind::ANCHOR_CON: return "ANCHOR_CON";
        case PointKind::SEED_SENTENCE: return "SEED_SENTENCE";
    }
    throw PreconditionError("unknown PointKind ordinal");
}

PointKind point_kind_from_string(const std::string& text) {
    if (text == "SPEAKER") return PointKind::SPEAKER;
    if (text == "ANCHOR_PRO") return PointKind::ANCHOR_PRO;
    if (text == "ANCHOR_CON") return PointKind::ANCHOR_CON;
    if (text == "SEED_SENTENCE") return PointKind::SEED_SENTENCE;
    throw ParseError("kind", "unknown point kind \"" + text + "\"");
}

std::string to_string(Method method) { return method == Method::PCA ? "pca" : "umap"; }

Method method_from_string(const std::string& text) {
    if (text == "pca" || text == "PCA") return Method::PCA;
    if (text == "umap" || text == "UMAP") return Method::UMAP;
    throw ParseError("method", "unknown reduction method \"" + text + "\" (want pca or umap)");
}

// Implemented in umap.cpp.
Eigen::MatrixXd umap_embed(const Eigen::MatrixXd& x, std::uint64_t seed,
                           const UmapParams& params);

// PCA scores for the top two components with the fixed sign convention.
Eigen::MatrixXd pca_embed(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const auto& singular = svd.singularValues();
    if (singular.size() == 0 || singular(0) <= 1e-12) {
        throw PreconditionError("data has zero variance; principal directions are undefined");
    }
    Eigen::MatrixXd v = svd.matrixV().leftCols(2);
    for (Eigen::Index c = 0; c < 2; ++c) {
        Eigen::Index lead = 0;
        for (Eigen::Index r = 1; r < v.rows(); ++r) {
            if (std::abs(v(r, c)) > std::abs(v(lead, c))) lead = r;
        }
        if (v(lead, c) < 0.0) v.col(c) = -v.col(c);
    }
    return centered * v;
}

ReduceResult reduce_2d(const std::vector<InputPoint>& inputs, Method method, std::uint64_t seed,
                       const UmapParams& params) {
    const Eigen::MatrixXd x = pack_inputs(inputs);
    Eigen::MatrixXd coords;
    if (method == Method::PCA) {
        coords = pca_embed(x);
    } else {
        coords = umap_embed(x, seed, params);
    }
    ReduceResult result;
    result.points = to_planar(inputs, coords);
    result.method = method;
    result.seed = seed;
    result.umap = params;
    return result;
}

}  // namespace ideoaxis::reduce
