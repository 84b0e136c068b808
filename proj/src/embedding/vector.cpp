#include "ideoaxis/embedding/vector.hpp"

#include <cmath>

#include "ideoaxis/common/error.hpp"

namespace ideoaxis::emb {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw DimensionError("dot: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> subtract(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionError("subtract: dimension mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

void normalize_in_place(std::vector<double>& a) {
    double n = norm2(a);
    if (n == 0.0) return;
    for (double& v : a) v /= n;
}

EmbeddingVector mean_vector(const std::vector<EmbeddingVector>& vectors) {
    if (vectors.empty()) throw PreconditionError("mean_vector: empty input");
    const auto& first = vectors.front();
    std::vector<double> acc(first.dimension(), 0.0);
    for (const auto& v : vectors) {
        if (v.provider_id != first.provider_id)
            throw DimensionError("mean_vector: mixed providers ('" + first.provider_id + "' vs '" +
                                 v.provider_id + "')");
        if (v.dimension() != first.dimension())
            throw DimensionError("mean_vector: mixed dimensions");
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v.values[i];
    }
    const double n = static_cast<double>(vectors.size());
    for (double& v : acc) v /= n;
    return EmbeddingVector{std::move(acc), first.provider_id};
}

}  // namespace ideoaxis::emb
