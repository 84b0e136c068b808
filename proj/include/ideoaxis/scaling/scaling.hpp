#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "ideoaxis/embedding/ops.hpp"
#include "ideoaxis/scaling/types.hpp"

namespace ideoaxis::scaling {

// One opinion sentence joined to its speech metadata; runs parallel to a
// vector array when building profiles.
struct OpinionUnit {
    std::string speech_id;
    int index = 0;
    std::string speaker_name;
    std::string party;
    std::string topic_id;
};

struct SkipEntry {
    std::string speaker_name;
    std::string party;
    std::string topic_id;
    int n_opinion_sentences = 0;
};

struct ProfileBuild {
    std::vector<StanceProfile> profiles;  // sorted by (topic_id, speaker_name)
    std::vector<SkipEntry> skipped;
};

// One profile per (topic, speaker). Sentence vectors are summed in
// (speech_id, index) order so the mean is reproducible regardless of input
// shuffling. Speakers with fewer than min_sentences opinion sentences are
// excluded and reported in `skipped`. When normalize_sentences is set, each
// sentence vector is L2-normalized before averaging.
ProfileBuild build_profiles(std::vector<OpinionUnit> units,
                            std::vector<emb::EmbeddingVector> vectors, int min_sentences,
                            bool normalize_sentences = false);

// Anchors from two hand-picked speakers' mean embeddings.
ReferenceAxis build_axis_from_pair(const StanceProfile& pro, const StanceProfile& con);

// Anchors from the mean embeddings of generated pro/contra seed texts.
ReferenceAxis build_axis_from_seeds(const std::string& topic_id,
                                    const std::vector<std::string>& pro_texts,
                                    const std::vector<std::string>& con_texts,
                                    emb::EmbeddingService& service,
                                    bool normalize_sentences = false);

// Shared constructor: direction = (pro - con)/||pro - con||.
ReferenceAxis axis_from_anchors(const std::string& topic_id, emb::EmbeddingVector anchor_pro,
                                emb::EmbeddingVector anchor_con, AxisMethod method,
                                std::array<std::string, 2> anchor_labels);

// raw = (mean - anchor_con) . direction; normalized = raw / ||pro - con||.
ProjectionResult project(const StanceProfile& profile, const ReferenceAxis& axis);

// Scalar projection of a bare vector (sentence-level grouping support).
double project_point(const std::vector<double>& values, const ReferenceAxis& axis);

// Equal-frequency three-way split by rank on normalized score, ties broken
// by speaker name; when sizes cannot be equal the lower groups absorb the
// remainder. Assigns `group` on every element in place.
void split_groups(std::vector<ProjectionResult>& results, int k = 3);

struct PartySummary {
    std::string party;
    int n = 0;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

// Five-number summaries per party, quartiles by linear interpolation
// (inclusive median), sorted by party median ascending.
std::vector<PartySummary> party_summary(const std::vector<ProjectionResult>& results);

// Linear-interpolation quantile on sorted data (the R-7 convention).
double quantile_linear(const std::vector<double>& sorted_values, double p);

// --- persistence ------------------------------------------------------

void store_profiles(const ProfileBuild& build, const std::filesystem::path& path);
ProfileBuild load_profiles(const std::filesystem::path& path);

// extra: free-form provenance (e.g. consumed seed-bundle hashes).
void store_axis(const ReferenceAxis& axis, const std::filesystem::path& path,
                const std::map<std::string, std::string>& provenance = {});
ReferenceAxis load_axis(const std::filesystem::path& path);

// Results table: topic_id, speaker_name, party, raw, normalized, group,
// n_opinion_sentences (tab-separated, header row).
void store_results(const std::vector<ProjectionResult>& results,
                   const std::filesystem::path& path);
std::vector<ProjectionResult> load_results(const std::filesystem::path& path);

void store_party_summaries(const std::vector<PartySummary>& summaries,
                           const std::filesystem::path& path);

}  // namespace ideoaxis::scaling
