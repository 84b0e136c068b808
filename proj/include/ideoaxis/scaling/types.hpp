#pragma once

#include <array>
#include <optional>
#include <string>

#include "ideoaxis/embedding/vector.hpp"

namespace ideoaxis::scaling {

// A speaker's point in embedding space for one topic: the mean of their
// opinion-sentence embeddings.
struct StanceProfile {
    std::string speaker_name;
    std::string party;
    std::string topic_id;
    emb::EmbeddingVector mean_embedding;
    int n_opinion_sentences = 0;
    int n_speeches = 0;
};

enum class AxisMethod { PAIR, GENERATED };

std::string to_string(AxisMethod m);
AxisMethod axis_method_from_string(const std::string& s);

// Pro/contra anchors and the unit direction from contra to pro.
struct ReferenceAxis {
    std::string topic_id;
    emb::EmbeddingVector anchor_pro;
    emb::EmbeddingVector anchor_con;
    emb::EmbeddingVector direction;  // (pro - con) / ||pro - con||
    AxisMethod method = AxisMethod::PAIR;
    std::array<std::string, 2> anchor_labels;  // {pro label, con label}

    double anchor_distance() const;
};

enum class Group { LEFT, CENTER, RIGHT };

std::string to_string(Group g);
Group group_from_string(const std::string& s);

// Scalar position of one speaker on one axis. normalized is the affine
// coordinate with the contra anchor at 0 and the pro anchor at 1; values
// outside [0, 1] are legal (speakers beyond the anchors). group is set only
// after split_groups has run.
struct ProjectionResult {
    std::string speaker_name;
    std::string party;
    std::string topic_id;
    double raw = 0.0;
    double normalized = 0.0;
    std::optional<Group> group;
    int n_opinion_sentences = 0;
};

}  // namespace ideoaxis::scaling
