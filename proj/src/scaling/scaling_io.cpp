#include <nlohmann/json.hpp>
#include <sstream>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"
#include "ideoaxis/scaling/scaling.hpp"

namespace ideoaxis::scaling {

using nlohmann::json;

namespace {
constexpr int kProfileSchema = 1;
constexpr int kAxisSchema = 1;

json vector_to_json(const emb::EmbeddingVector& v) {
    return json{{"provider_id", v.provider_id}, {"values", v.values}};
}

emb::EmbeddingVector vector_from_json(const json& j) {
    emb::EmbeddingVector v;
    v.provider_id = j.at("provider_id").get<std::string>();
    v.values = j.at("values").get<std::vector<double>>();
    return v;
}
}  // namespace

void store_profiles(const ProfileBuild& build, const std::filesystem::path& path) {
    std::string out;
    for (const auto& p : build.profiles) {
        json j{{"schema_version", kProfileSchema},
               {"kind", "profile"},
               {"speaker_name", p.speaker_name},
               {"party", p.party},
               {"topic_id", p.topic_id},
               {"mean_embedding", vector_to_json(p.mean_embedding)},
               {"n_opinion_sentences", p.n_opinion_sentences},
               {"n_speeches", p.n_speeches}};
        out += j.dump();
        out += '\n';
    }
    for (const auto& s : build.skipped) {
        json j{{"schema_version", kProfileSchema},
               {"kind", "skipped"},
               {"speaker_name", s.speaker_name},
               {"party", s.party},
               {"topic_id", s.topic_id},
               {"n_opinion_sentences", s.n_opinion_sentences}};
        out += j.dump();
        out += '\n';
    }
    io::write_file_atomic(path, out);
}

ProfileBuild load_profiles(const std::filesystem::path& path) {
    ProfileBuild build;
    for (const auto& line : io::read_lines(path)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("profile line", e.what());
        }
        if (j.at("schema_version").get<int>() != kProfileSchema)
            throw SchemaVersionError("profile file " + path.string() + " has schema_version " +
                                     j.at("schema_version").dump() + ", expected " +
                                     std::to_string(kProfileSchema));
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "profile") {
            StanceProfile p;
            p.speaker_name = j.at("speaker_name").get<std::string>();
            p.party = j.at("party").get<std::string>();
            p.topic_id = j.at("topic_id").get<std::string>();
            p.mean_embedding = vector_from_json(j.at("mean_embedding"));
            p.n_opinion_sentences = j.at("n_opinion_sentences").get<int>();
            p.n_speeches = j.at("n_speeches").get<int>();
            build.profiles.push_back(std::move(p));
        } else if (kind == "skipped") {
            build.skipped.push_back(SkipEntry{j.at("speaker_name").get<std::string>(),
                                              j.at("party").get<std::string>(),
                                              j.at("topic_id").get<std::string>(),
                                              j.at("n_opinion_sentences").get<int>()});
        } else {
            throw ParseError("kind", "unknown profile record kind '" + kind + "'");
        }
    }
    return build;
}

void store_axis(const ReferenceAxis& axis, const std::filesystem::path& path,
                const std::map<std::string, std::string>& provenance) {
    json j{{"schema_version", kAxisSchema},
           {"topic_id", axis.topic_id},
           {"method", to_string(axis.method)},
           {"anchor_labels", axis.anchor_labels},
           {"anchor_pro", vector_to_json(axis.anchor_pro)},
           {"anchor_con", vector_to_json(axis.anchor_con)},
           {"direction", vector_to_json(axis.direction)},
           {"provenance", provenance}};
    io::write_file_atomic(path, j.dump(2) + "\n");
}

ReferenceAxis load_axis(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        throw ParseError("axis file", e.what());
    }
    if (j.at("schema_version").get<int>() != kAxisSchema)
        throw SchemaVersionError("axis file " + path.string() + " has unsupported schema_version");
    ReferenceAxis axis;
    axis.topic_id = j.at("topic_id").get<std::string>();
    axis.method = axis_method_from_string(j.at("method").get<std::string>());
    auto labels = j.at("anchor_labels").get<std::vector<std::string>>();
    if (labels.size() != 2) throw ParseError("anchor_labels", "expected exactly two labels");
    axis.anchor_labels = {labels[0], labels[1]};
    axis.anchor_pro = vector_from_json(j.at("anchor_pro"));
    axis.anchor_con = vector_from_json(j.at("anchor_con"));
    axis.direction = vector_from_json(j.at("direction"));
    return axis;
}

void store_results(const std::vector<ProjectionResult>& results,
                   const std::filesystem::path& path) {
    std::string out =
        "topic_id\tspeaker_name\tparty\traw\tnormalized\tgroup\tn_opinion_sentences\n";
    for (const auto& r : results) {
        out += r.topic_id;
        out += '\t';
        out += r.speaker_name;
        out += '\t';
        out += r.party;
        out += '\t';
        out += io::format_double(r.raw);
        out += '\t';
        out += io::format_double(r.normalized);
        out += '\t';
        out += r.group ? to_string(*r.group) : "-";
        out += '\t';
        out += std::to_string(r.n_opinion_sentences);
        out += '\n';
    }
    io::write_file_atomic(path, out);
}

std::vector<ProjectionResult> load_results(const std::filesystem::path& path) {
    auto lines = io::read_lines(path);
    if (lines.empty() || lines[0].rfind("topic_id\t", 0) != 0)
        throw ParseError("header", "results file " + path.string() + " lacks the expected header");
    std::vector<ProjectionResult> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = io::split(lines[i], '\t');
        if (f.size() != 7)
            throw ParseError("line " + std::to_string(i + 1), "expected 7 tab-separated fields");
        ProjectionResult r;
        r.topic_id = f[0];
        r.speaker_name = f[1];
        r.party = f[2];
        r.raw = std::stod(f[3]);
        r.normalized = std::stod(f[4]);
        if (f[5] != "-") r.group = group_from_string(f[5]);
        r.n_opinion_sentences = std::stoi(f[6]);
        out.push_back(std::move(r));
    }
    return out;
}

void store_party_summaries(const std::vector<PartySummary>& summaries,
                           const std::filesystem::path& path) {
    std::string out = "party\tn\tmin\tq1\tmedian\tq3\tmax\n";
    for (const auto& s : summaries) {
        out += s.party;
        out += '\t';
        out += std::to_string(s.n);
        out += '\t';
        out += io::format_double(s.min);
        out += '\t';
        out += io::format_double(s.q1);
        out += '\t';
        out += io::format_double(s.median);
        out += '\t';
        out += io::format_double(s.q3);
        out += '\t';
        out += io::format_double(s.max);
        out += '\n';
    }
    io::write_file_atomic(path, out);
}

}  // namespace ideoaxis::scaling
