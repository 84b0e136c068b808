#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ideoaxis::hashing {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

// 64-bit FNV-1a over raw bytes; used for deterministic seeding, not integrity.
constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffset) {
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

// Mixes an integer into an FNV state as 8 little-endian bytes.
constexpr std::uint64_t fnv1a64_u64(std::uint64_t v, std::uint64_t h) {
    for (int k = 0; k < 8; ++k) {
        h ^= (v >> (k * 8)) & 0xFFu;
        h *= kFnvPrime;
    }
    return h;
}

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

// SHA-256 of a file's contents; throws NotFoundError if unreadable.
std::string sha256_file_hex(const std::string& path);

}  // namespace ideoaxis::hashing
