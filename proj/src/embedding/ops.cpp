#include "ideoaxis/embedding/ops.hpp"

#include <cmath>
#include <map>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/hashing.hpp"

namespace ideoaxis::emb {

EmbeddingService::EmbeddingService(EmbeddingProvider* provider, EmbeddingCache* cache)
    : provider_(provider), cache_(cache) {
    if (!provider_ && !cache_)
        throw PreconditionError("EmbeddingService needs a provider, a cache, or both");
    if (provider_ && cache_ &&
        provider_->descriptor().dimension != cache_->descriptor().dimension)
        throw DimensionError("provider and cache disagree on dimension");
}

const ProviderDescriptor& EmbeddingService::descriptor() const {
    return provider_ ? provider_->descriptor() : cache_->descriptor();
}

std::string EmbeddingService::content_key(const std::string& text) {
    return hashing::sha256_hex(text);
}

std::vector<EmbeddingVector> EmbeddingService::embed_batch(const std::vector<std::string>& texts) {
    const auto& descr = descriptor();
    std::vector<EmbeddingVector> out(texts.size());
    std::map<std::string, std::vector<double>> resolved;  // key -> canonical values
    std::vector<std::size_t> missing;                     // indices still unresolved

    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (texts[i].empty())
            throw PreconditionError("embed_batch: empty text at index " + std::to_string(i));
        const std::string key = content_key(texts[i]);
        if (auto it = resolved.find(key); it != resolved.end()) {
            out[i] = EmbeddingVector{it->second, descr.provider_id};
            continue;
        }
        if (cache_) {
            if (auto hit = cache_->lookup(key)) {
                resolved.emplace(key, *hit);
                out[i] = EmbeddingVector{std::move(*hit), descr.provider_id};
                continue;
            }
        }
        missing.push_back(i);
    }

    if (!missing.empty() && !provider_)
        throw Error("embedding provider unavailable and cache miss for text index " +
                    std::to_string(missing.front()));

    // Dedup misses so one text is embedded once per call.
    std::vector<std::size_t> unique_missing;
    for (std::size_t i : missing) {
        const std::string key = content_key(texts[i]);
        if (!resolved.count(key)) {
            resolved.emplace(key, std::vector<double>{});
            unique_missing.push_back(i);
        }
    }

    const std::size_t batch = provider_ ? provider_->max_batch_size() : 0;
    for (std::size_t start = 0; start < unique_missing.size(); start += batch) {
        const std::size_t end = std::min(unique_missing.size(), start + batch);
        std::vector<std::string> chunk;
        chunk.reserve(end - start);
        for (std::size_t k = start; k < end; ++k) chunk.push_back(texts[unique_missing[k]]);

        std::vector<EmbeddingVector> embedded;
        try {
            embedded = provider_->embed(chunk);
        } catch (const DimensionError&) {
            throw;
        } catch (const Error& e) {
            throw Error("embedding provider failed for text index " +
                        std::to_string(unique_missing[start]) + ": " + e.what());
        }
        if (embedded.size() != chunk.size())
            throw DimensionError("provider returned " + std::to_string(embedded.size()) +
                                 " vectors for a batch of " + std::to_string(chunk.size()));

        for (std::size_t k = 0; k < embedded.size(); ++k) {
            auto& vec = embedded[k].values;
            if (vec.size() != descr.dimension)
                throw DimensionError("provider '" + descr.provider_id + "' emitted dimension " +
                                     std::to_string(vec.size()) + ", declared " +
                                     std::to_string(descr.dimension));
            // Canonicalize to float32 precision; this is the value of record.
            for (double& x : vec) {
                if (!std::isfinite(x))
                    throw DimensionError("provider emitted a non-finite value");
                x = static_cast<double>(static_cast<float>(x));
            }
            const std::string key = content_key(texts[unique_missing[start + k]]);
            if (cache_) cache_->insert(key, vec);
            resolved[key] = vec;
        }
    }

    for (std::size_t i : missing) {
        const std::string key = content_key(texts[i]);
        out[i] = EmbeddingVector{resolved.at(key), descr.provider_id};
    }
    return out;
}

}  // namespace ideoaxis::emb
