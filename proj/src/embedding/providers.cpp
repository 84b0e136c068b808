#include <cmath>
#include <numbers>
#include <random>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/hashing.hpp"
#include "ideoaxis/common/utf8.hpp"
#include "ideoaxis/embedding/provider.hpp"

namespace ideoaxis::emb {

MockProvider::MockProvider(std::uint64_t seed, std::size_t dimension) : seed_(seed) {
    descriptor_.provider_id = "mock-s" + std::to_string(seed) + "-d" + std::to_string(dimension);
    descriptor_.dimension = dimension;
    descriptor_.pooling = Pooling::NATIVE;
}

std::vector<double> MockProvider::vector_for(const std::string& text, std::uint64_t seed,
                                             std::size_t dimension) {
    // RNG state: FNV-1a over the text bytes, then over the seed's 8 LE bytes.
    std::uint64_t state = hashing::fnv1a64(text);
    state = hashing::fnv1a64_u64(seed, state);
    std::mt19937_64 rng(state);

    // Box-Muller on explicit 53-bit uniforms; kept free of
    // std::normal_distribution so the construction is portable and can be
    // recomputed independently.
    std::vector<double> v(dimension);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::size_t i = 0;
    while (i < dimension) {
        double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
        double u2 = static_cast<double>(rng() >> 11) * 0x1p-53;          // [0, 1)
        double r = std::sqrt(-2.0 * std::log(u1));
        v[i++] = r * std::cos(two_pi * u2);
        if (i < dimension) v[i++] = r * std::sin(two_pi * u2);
    }
    normalize_in_place(v);
    return v;
}

std::vector<EmbeddingVector> MockProvider::embed(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts)
        out.push_back(EmbeddingVector{vector_for(t, seed_, descriptor_.dimension),
                                      descriptor_.provider_id});
    return out;
}

NgramProvider::NgramProvider(std::size_t dimension) {
    descriptor_.provider_id = "ngram-v1-d" + std::to_string(dimension);
    descriptor_.dimension = dimension;
    descriptor_.pooling = Pooling::NATIVE;
}

std::vector<EmbeddingVector> NgramProvider::embed(const std::vector<std::string>& texts) {
    const std::size_t dim = descriptor_.dimension;
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        auto cps = utf8::decode_all(text);
        std::vector<char32_t> kept;
        kept.reserve(cps.size());
        for (char32_t cp : cps) {
            if (utf8::is_space(cp)) continue;
            if (cp >= U'A' && cp <= U'Z') cp += 32;
            kept.push_back(cp);
        }
        std::vector<double> acc(dim, 0.0);
        for (std::size_t n = 1; n <= 3; ++n) {
            if (kept.size() < n) break;
            for (std::size_t i = 0; i + n <= kept.size(); ++i) {
                std::string gram;
                for (std::size_t k = 0; k < n; ++k) utf8::encode(kept[i + k], gram);
                std::uint64_t h = hashing::fnv1a64(gram);
                h = hashing::fnv1a64_u64(n, h);
                double sign = (h & (1ull << 62)) ? 1.0 : -1.0;
                acc[h % dim] += sign;
            }
        }
        normalize_in_place(acc);
        out.push_back(EmbeddingVector{std::move(acc), descriptor_.provider_id});
    }
    return out;
}

}  // namespace ideoaxis::emb
