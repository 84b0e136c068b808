#pragma once

#include <string>
#include <vector>

#include "ideoaxis/embedding/cache.hpp"
#include "ideoaxis/embedding/provider.hpp"

namespace ideoaxis::emb {

// Front door for embedding text: consults the cache, batches misses to the
// provider (respecting its max batch size), canonicalizes every provider
// vector to float32 precision, and writes it back to the cache. Either the
// provider or the cache may be absent; with no provider, every text must be
// a cache hit (offline mode).
class EmbeddingService {
public:
    EmbeddingService(EmbeddingProvider* provider, EmbeddingCache* cache);

    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts);

    const ProviderDescriptor& descriptor() const;

    // Cache key: SHA-256 of the text's UTF-8 bytes.
    static std::string content_key(const std::string& text);

private:
    EmbeddingProvider* provider_;
    EmbeddingCache* cache_;
};

}  // namespace ideoaxis::emb
