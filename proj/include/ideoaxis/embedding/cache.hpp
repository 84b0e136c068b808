#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ideoaxis/embedding/vector.hpp"

namespace ideoaxis::emb {

// Content-addressed on-disk embedding cache, one pair of files per
// provider: <provider_id>.vec holds fixed-width records of little-endian
// 32-bit floats, <provider_id>.idx is a text sidecar mapping content hash
// to record number. Append-only, no eviction. Safe for concurrent readers
// with serialized writers.
class EmbeddingCache {
public:
    EmbeddingCache(std::filesystem::path dir, ProviderDescriptor descriptor);

    // Values are returned widened to double, bit-identical to what was
    // stored (inserted values must already be float32-exact).
    std::optional<std::vector<double>> lookup(const std::string& content_hash) const;

    void insert(const std::string& content_hash, const std::vector<double>& values);

    std::size_t size() const;
    const ProviderDescriptor& descriptor() const { return descriptor_; }
    std::filesystem::path vec_path() const;
    std::filesystem::path idx_path() const;

private:
    std::filesystem::path dir_;
    ProviderDescriptor descriptor_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::uint64_t> index_;  // content hash -> record number
};

}  // namespace ideoaxis::emb
