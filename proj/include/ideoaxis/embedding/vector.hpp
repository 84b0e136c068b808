#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ideoaxis::emb {

// Fixed-dimension sentence/document embedding. Values are held as doubles
// for downstream arithmetic; providers emit values that are exactly
// representable as 32-bit floats so the on-disk cache round-trips bit-for-bit.
struct EmbeddingVector {
    std::vector<double> values;
    std::string provider_id;

    std::size_t dimension() const { return values.size(); }
};

enum class Pooling { MEAN_TOKENS, NATIVE };

struct ProviderDescriptor {
    std::string provider_id;
    std::size_t dimension = 768;
    Pooling pooling = Pooling::MEAN_TOKENS;
};

// Small dense-vector helpers shared by the scaling and reduction code.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
std::vector<double> subtract(const std::vector<double>& a, const std::vector<double>& b);
void normalize_in_place(std::vector<double>& a);

// Componentwise arithmetic mean in input order. Callers that need
// reproducibility across shuffles must pre-sort inputs by a stable key.
// Throws PreconditionError on empty input, DimensionError on mixed
// providers or dimensions.
EmbeddingVector mean_vector(const std::vector<EmbeddingVector>& vectors);

}  // namespace ideoaxis::emb
