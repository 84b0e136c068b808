#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ideoaxis/embedding/vector.hpp"

namespace ideoaxis::emb {

// Synchronous batch embedding contract. Implementations must be
// deterministic for a fixed configuration: the same text always maps to the
// same vector. EmbeddingService canonicalizes provider output to 32-bit
// float precision (the cache's element type) before anything downstream
// sees it, so with-cache and without-cache runs agree bit-for-bit.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual const ProviderDescriptor& descriptor() const = 0;

    // One vector per text, order preserved. Texts must be non-empty.
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;

    virtual std::size_t max_batch_size() const { return 64; }
};

// Deterministic test provider: the text and seed are hashed into an RNG
// state, expanded to `dimension` standard normals via Box-Muller, and
// L2-normalized. No model, no I/O; any party can recompute the vector from
// this definition alone.
class MockProvider : public EmbeddingProvider {
public:
    explicit MockProvider(std::uint64_t seed = 0, std::size_t dimension = 768);

    const ProviderDescriptor& descriptor() const override { return descriptor_; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

    // The defining construction, exposed so tests can cross-check a single
    // text without going through the batch interface.
    static std::vector<double> vector_for(const std::string& text, std::uint64_t seed,
                                          std::size_t dimension);

private:
    ProviderDescriptor descriptor_;
    std::uint64_t seed_;
};

// Character n-gram hashing provider. Surface-pattern features (1..3-gram
// code-point windows, signed feature hashing) give texts with shared
// wording nearby vectors; this is the offline default for fixture runs and
// the classifier baseline. Deterministic, no model.
class NgramProvider : public EmbeddingProvider {
public:
    explicit NgramProvider(std::size_t dimension = 256);

    const ProviderDescriptor& descriptor() const override { return descriptor_; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    ProviderDescriptor descriptor_;
};

// Remote provider speaking a minimal JSON protocol:
//   POST {base_url}/embed  {"texts": ["...", ...]}
//   ->  {"provider_id": "...", "dimension": N, "vectors": [[...], ...]}
// Used to plug in an external model server (e.g. a Japanese SBERT sidecar).
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    HttpEmbeddingProvider(std::string base_url, ProviderDescriptor descriptor,
                          std::size_t max_batch = 32);

    const ProviderDescriptor& descriptor() const override { return descriptor_; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    std::size_t max_batch_size() const override { return max_batch_; }

private:
    std::string base_url_;
    ProviderDescriptor descriptor_;
    std::size_t max_batch_;
};

}  // namespace ideoaxis::emb
