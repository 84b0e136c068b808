#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ideoaxis::pipeline {

// One pipeline work unit's provenance: which inputs (by content hash) and
// parameters produced which outputs. status "cache-hit" marks a rerun that
// found everything already up to date and did no work.
struct ManifestEntry {
    std::string stage;
    std::string unit;    // topic id, or "*" for topic-independent work
    std::string status;  // "ok" | "cache-hit"
    std::map<std::string, std::string> inputs;   // label -> sha256
    std::string params_hash;
    std::map<std::string, std::string> outputs;  // path relative to output dir -> sha256
    std::string timestamp;  // ISO-8601 UTC; ignored by idempotence checks

    bool operator==(const ManifestEntry&) const = default;
};

// Append-only JSONL journal in the output directory. Loading tolerates a
// missing file (empty manifest); malformed lines are an error.
class Manifest {
public:
    explicit Manifest(std::filesystem::path file);

    void append(ManifestEntry entry);  // stamps the timestamp, persists, and records

    const std::vector<ManifestEntry>& entries() const { return entries_; }

    // Most recent entry for a work unit, if any.
    const ManifestEntry* latest(const std::string& stage, const std::string& unit) const;

    // Most recent recorded hash for an output artifact across all entries.
    std::optional<std::string> latest_output_hash(const std::string& relative_path) const;

    const std::filesystem::path& path() const { return file_; }

private:
    std::filesystem::path file_;
    std::vector<ManifestEntry> entries_;
};

}  // namespace ideoaxis::pipeline
