#include "ideoaxis/scaling/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ideoaxis/common/error.hpp"

namespace ideoaxis::scaling {

std::string to_string(AxisMethod m) { return m == AxisMethod::PAIR ? "PAIR" : "GENERATED"; }

AxisMethod axis_method_from_string(const std::string& s) {
    if (s == "PAIR") return AxisMethod::PAIR;
    if (s == "GENERATED") return AxisMethod::GENERATED;
    throw ParseError("method", "unknown axis method '" + s + "'");
}

std::string to_string(Group g) {
    switch (g) {
        case Group::LEFT: return "LEFT";
        case Group::CENTER: return "CENTER";
        case Group::RIGHT: return "RIGHT";
    }
    return "?";
}

Group group_from_string(const std::string& s) {
    if (s == "LEFT") return Group::LEFT;
    if (s == "CENTER") return Group::CENTER;
    if (s == "RIGHT") return Group::RIGHT;
    throw ParseError("group", "unknown group '" + s + "'");
}

double ReferenceAxis::anchor_distance() const {
    return emb::norm2(emb::subtract(anchor_pro.values, anchor_con.values));
}

ProfileBuild build_profiles(std::vector<OpinionUnit> units,
                            std::vector<emb::EmbeddingVector> vectors, int min_sentences,
                            bool normalize_sentences) {
    if (min_sentences < 1) throw PreconditionError("build_profiles: min_sentences must be >= 1");
    if (units.size() != vectors.size())
        throw PreconditionError("build_profiles: " + std::to_string(units.size()) +
                                " units but " + std::to_string(vectors.size()) + " vectors");

    // Fix the aggregation order once: (topic, speaker, speech_id, index).
    std::vector<std::size_t> order(units.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ua = units[a];
        const auto& ub = units[b];
        return std::tie(ua.topic_id, ua.speaker_name, ua.speech_id, ua.index) <
               std::tie(ub.topic_id, ub.speaker_name, ub.speech_id, ub.index);
    });

    ProfileBuild out;
    std::size_t pos = 0;
    while (pos < order.size()) {
        const auto& head = units[order[pos]];
        std::size_t end = pos;
        while (end < order.size() && units[order[end]].topic_id == head.topic_id &&
               units[order[end]].speaker_name == head.speaker_name)
            ++end;

        const int count = static_cast<int>(end - pos);
        std::set<std::string> speeches;
        std::vector<emb::EmbeddingVector> member_vectors;
        member_vectors.reserve(end - pos);
        for (std::size_t k = pos; k < end; ++k) {
            const std::size_t i = order[k];
            speeches.insert(units[i].speech_id);
            emb::EmbeddingVector v = vectors[i];
            if (normalize_sentences) emb::normalize_in_place(v.values);
            member_vectors.push_back(std::move(v));
        }

        if (count < min_sentences) {
            out.skipped.push_back(SkipEntry{head.speaker_name, head.party, head.topic_id, count});
        } else {
            StanceProfile p;
            p.speaker_name = head.speaker_name;
            p.party = head.party;
            p.topic_id = head.topic_id;
            p.mean_embedding = emb::mean_vector(member_vectors);
            p.n_opinion_sentences = count;
            p.n_speeches = static_cast<int>(speeches.size());
            out.profiles.push_back(std::move(p));
        }
        pos = end;
    }
    return out;
}

ReferenceAxis axis_from_anchors(const std::string& topic_id, emb::EmbeddingVector anchor_pro,
                                emb::EmbeddingVector anchor_con, AxisMethod method,
                                std::array<std::string, 2> anchor_labels) {
    if (anchor_pro.provider_id != anchor_con.provider_id)
        throw DimensionError("axis anchors come from different providers");
    if (anchor_pro.dimension() != anchor_con.dimension())
        throw DimensionError("axis anchors have different dimensions");

    auto diff = emb::subtract(anchor_pro.values, anchor_con.values);
    const double dist = emb::norm2(diff);
    if (dist == 0.0)
        throw DegenerateAxisError("axis anchors coincide for topic '" + topic_id + "' (" +
                                  anchor_labels[0] + " vs " + anchor_labels[1] + ")");
    for (double& x : diff) x /= dist;

    ReferenceAxis axis;
    axis.topic_id = topic_id;
    axis.anchor_pro = std::move(anchor_pro);
    axis.anchor_con = std::move(anchor_con);
    axis.direction = emb::EmbeddingVector{std::move(diff), axis.anchor_pro.provider_id};
    axis.method = method;
    axis.anchor_labels = std::move(anchor_labels);
    return axis;
}

ReferenceAxis build_axis_from_pair(const StanceProfile& pro, const StanceProfile& con) {
    if (pro.topic_id != con.topic_id)
        throw PreconditionError("axis pair spans two topics: '" + pro.topic_id + "' vs '" +
                                con.topic_id + "'");
    return axis_from_anchors(pro.topic_id, pro.mean_embedding, con.mean_embedding,
                             AxisMethod::PAIR, {pro.speaker_name, con.speaker_name});
}

ReferenceAxis build_axis_from_seeds(const std::string& topic_id,
                                    const std::vector<std::string>& pro_texts,
                                    const std::vector<std::string>& con_texts,
                                    emb::EmbeddingService& service, bool normalize_sentences) {
    if (pro_texts.empty() || con_texts.empty())
        throw PreconditionError("build_axis_from_seeds: both seed text lists must be non-empty");

    auto mean_of = [&](const std::vector<std::string>& texts) {
        auto vectors = service.embed_batch(texts);
        if (normalize_sentences)
            for (auto& v : vectors) emb::normalize_in_place(v.values);
        return emb::mean_vector(vectors);
    };
    return axis_from_anchors(topic_id, mean_of(pro_texts), mean_of(con_texts),
                             AxisMethod::GENERATED, {"generated-pro", "generated-con"});
}

double project_point(const std::vector<double>& values, const ReferenceAxis& axis) {
    const double raw = emb::dot(emb::subtract(values, axis.anchor_con.values),
                                axis.direction.values);
    return raw / axis.anchor_distance();
}

ProjectionResult project(const StanceProfile& profile, const ReferenceAxis& axis) {
    if (profile.mean_embedding.dimension() != axis.direction.dimension())
        throw DimensionError("project: profile dimension " +
                             std::to_string(profile.mean_embedding.dimension()) +
                             " != axis dimension " + std::to_string(axis.direction.dimension()));
    ProjectionResult r;
    r.speaker_name = profile.speaker_name;
    r.party = profile.party;
    r.topic_id = profile.topic_id;
    r.raw = emb::dot(emb::subtract(profile.mean_embedding.values, axis.anchor_con.values),
                     axis.direction.values);
    r.normalized = r.raw / axis.anchor_distance();
    r.n_opinion_sentences = profile.n_opinion_sentences;
    return r;
}

void split_groups(std::vector<ProjectionResult>& results, int k) {
    if (k != 3) throw PreconditionError("split_groups: only the three-way split is supported");
    if (static_cast<int>(results.size()) < k)
        throw PreconditionError("split_groups: need at least " + std::to_string(k) +
                                " results, got " + std::to_string(results.size()));

    std::vector<std::size_t> order(results.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(results[a].normalized, results[a].speaker_name) <
               std::tie(results[b].normalized, results[b].speaker_name);
    });

    // Lower groups absorb the remainder: n=7 -> {3,2,2} with LEFT largest.
    const std::size_t n = results.size();
    const std::size_t base = n / 3;
    const std::size_t rem = n % 3;
    const std::size_t left_end = base + (rem > 0 ? 1 : 0);
    const std::size_t center_end = left_end + base + (rem > 1 ? 1 : 0);
    for (std::size_t rank = 0; rank < n; ++rank) {
        Group g = rank < left_end     ? Group::LEFT
                  : rank < center_end ? Group::CENTER
                                      : Group::RIGHT;
        results[order[rank]].group = g;
    }
}

double quantile_linear(const std::vector<double>& sorted_values, double p) {
    if (sorted_values.empty()) throw PreconditionError("quantile of empty set");
    const std::size_t n = sorted_values.size();
    if (n == 1) return sorted_values[0];
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted_values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

std::vector<PartySummary> party_summary(const std::vector<ProjectionResult>& results) {
    std::map<std::string, std::vector<double>> by_party;
    for (const auto& r : results) {
        if (r.party.empty())
            throw PreconditionError("party_summary: result for '" + r.speaker_name +
                                    "' has no party");
        by_party[r.party].push_back(r.normalized);
    }
    std::vector<PartySummary> out;
    for (auto& [party, scores] : by_party) {
        std::sort(scores.begin(), scores.end());
        PartySummary s;
        s.party = party;
        s.n = static_cast<int>(scores.size());
        s.min = scores.front();
        s.q1 = quantile_linear(scores, 0.25);
        s.median = quantile_linear(scores, 0.5);
        s.q3 = quantile_linear(scores, 0.75);
        s.max = scores.back();
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const PartySummary& a, const PartySummary& b) {
        return std::tie(a.median, a.party) < std::tie(b.median, b.party);
    });
    return out;
}

}  // namespace ideoaxis::scaling
