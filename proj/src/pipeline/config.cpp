#include "ideoaxis/pipeline/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"

namespace ideoaxis::pipeline {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& context,
                         const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (allowed.count(it.key()) == 0) {
            throw ConfigError("unknown key \"" + it.key() + "\" in " + context);
        }
    }
}

// Identifiers that end up inside artifact and cache file names. All-dot
// tokens ("." / "..") are directory references, not names.
bool is_safe_file_token(const std::string& s) {
    if (s.empty()) return false;
    if (s.find_first_not_of('.') == std::string::npos) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.';
    });
}

const json& require(const json& obj, const std::string& context, const std::string& key) {
    if (!obj.contains(key)) {
        throw ConfigError(context + " is missing required key \"" + key + "\"");
    }
    return obj.at(key);
}

std::string get_string(const json& obj, const std::string& context, const std::string& key) {
    const auto& v = require(obj, context, key);
    if (!v.is_string()) throw ConfigError(context + "." + key + " must be a string");
    return v.get<std::string>();
}

std::string get_string_or(const json& obj, const std::string& context, const std::string& key,
                          const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw ConfigError(context + "." + key + " must be a string");
    return obj.at(key).get<std::string>();
}

int get_int_or(const json& obj, const std::string& context, const std::string& key,
               int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_integer()) {
        throw ConfigError(context + "." + key + " must be an integer");
    }
    return obj.at(key).get<int>();
}

std::uint64_t get_u64_or(const json& obj, const std::string& context, const std::string& key,
                         std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_unsigned() && !obj.at(key).is_number_integer()) {
        throw ConfigError(context + "." + key + " must be a nonnegative integer");
    }
    if (obj.at(key).is_number_integer() && obj.at(key).get<long long>() < 0) {
        throw ConfigError(context + "." + key + " must be a nonnegative integer");
    }
    return obj.at(key).get<std::uint64_t>();
}

double get_double_or(const json& obj, const std::string& context, const std::string& key,
                     double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw ConfigError(context + "." + key + " must be a number");
    return obj.at(key).get<double>();
}

bool get_bool_or(const json& obj, const std::string& context, const std::string& key,
                 bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) throw ConfigError(context + "." + key + " must be a boolean");
    return obj.at(key).get<bool>();
}

ProviderConfig parse_provider(const json& obj) {
    if (!obj.is_object()) throw ConfigError("provider must be an object");
    reject_unknown_keys(obj, "provider", {"kind", "dimension", "seed", "base_url", "provider_id"});
    ProviderConfig provider;
    provider.kind = provider_kind_from_string(get_string(obj, "provider", "kind"));
    const int default_dim = provider.kind == ProviderKind::MOCK ? 768 : 256;
    const int dim = get_int_or(obj, "provider", "dimension", default_dim);
    if (dim < 2) throw ConfigError("provider.dimension must be at least 2");
    provider.dimension = static_cast<std::size_t>(dim);
    provider.seed = get_u64_or(obj, "provider", "seed", 0);
    provider.base_url = get_string_or(obj, "provider", "base_url", "");
    provider.provider_id = get_string_or(obj, "provider", "provider_id", "");
    if (provider.kind == ProviderKind::HTTP) {
        if (provider.base_url.empty()) {
            throw ConfigError("provider.base_url is required for kind \"http\"");
        }
        if (provider.provider_id.empty()) {
            throw ConfigError("provider.provider_id is required for kind \"http\"");
        }
        if (!is_safe_file_token(provider.provider_id)) {
            throw ConfigError("provider.provider_id may only contain [A-Za-z0-9._-]; it names "
                              "the embedding cache files");
        }
    } else {
        if (!provider.base_url.empty()) {
            throw ConfigError("provider.base_url is only valid for kind \"http\"");
        }
        if (!provider.provider_id.empty()) {
            throw ConfigError("provider.provider_id is only valid for kind \"http\"");
        }
        if (provider.kind == ProviderKind::NGRAM && obj.contains("seed")) {
            throw ConfigError("provider.seed is only valid for kind \"mock\"");
        }
    }
    return provider;
}

ClassifierConfig parse_classifier(const json& obj) {
    if (!obj.is_object()) throw ConfigError("classifier must be an object");
    reject_unknown_keys(obj, "classifier",
                        {"weights_path", "train_from", "seed", "epochs", "learning_rate", "l2"});
    ClassifierConfig classifier;
    classifier.weights_path = get_string_or(obj, "classifier", "weights_path", "");
    classifier.train_from = get_string_or(obj, "classifier", "train_from", "");
    const bool has_weights = !classifier.weights_path.empty();
    const bool has_train = !classifier.train_from.empty();
    if (has_weights == has_train) {
        throw ConfigError("classifier needs exactly one of weights_path or train_from");
    }
    if (has_weights && (obj.contains("seed") || obj.contains("epochs") ||
                        obj.contains("learning_rate") || obj.contains("l2"))) {
        throw ConfigError("classifier training options are only valid with train_from");
    }
    classifier.train.seed = get_u64_or(obj, "classifier", "seed", classifier.train.seed);
    classifier.train.epochs = get_int_or(obj, "classifier", "epochs", classifier.train.epochs);
    classifier.train.learning_rate =
        get_double_or(obj, "classifier", "learning_rate", classifier.train.learning_rate);
    classifier.train.l2 = get_double_or(obj, "classifier", "l2", classifier.train.l2);
    if (classifier.train.epochs < 1) throw ConfigError("classifier.epochs must be at least 1");
    return classifier;
}

ReducerConfig parse_reducer(const json& obj) {
    if (!obj.is_object()) throw ConfigError("reducer must be an object");
    reject_unknown_keys(obj, "reducer", {"method", "seed", "umap"});
    ReducerConfig reducer;
    if (obj.contains("method")) {
        try {
            reducer.method = reduce::method_from_string(get_string(obj, "reducer", "method"));
        } catch (const ParseError& e) {
            throw ConfigError(std::string("reducer.method: ") + e.what());
        }
    }
    reducer.seed = get_u64_or(obj, "reducer", "seed", 0);
    if (obj.contains("umap")) {
        const auto& u = obj.at("umap");
        if (!u.is_object()) throw ConfigError("reducer.umap must be an object");
        reject_unknown_keys(u, "reducer.umap",
                            {"n_neighbors", "min_dist", "a", "b", "n_epochs", "learning_rate",
                             "negative_samples"});
        auto& p = reducer.umap;
        p.n_neighbors = get_int_or(u, "reducer.umap", "n_neighbors", p.n_neighbors);
        p.min_dist = get_double_or(u, "reducer.umap", "min_dist", p.min_dist);
        p.a = get_double_or(u, "reducer.umap", "a", p.a);
        p.b = get_double_or(u, "reducer.umap", "b", p.b);
        p.n_epochs = get_int_or(u, "reducer.umap", "n_epochs", p.n_epochs);
        p.learning_rate = get_double_or(u, "reducer.umap", "learning_rate", p.learning_rate);
        p.negative_samples = get_int_or(u, "reducer.umap", "negative_samples", p.negative_samples);
        if (p.n_neighbors < 2) throw ConfigError("reducer.umap.n_neighbors must be at least 2");
        if (p.n_epochs < 1) throw ConfigError("reducer.umap.n_epochs must be at least 1");
    }
    return reducer;
}

AxisSpec parse_axis(const json& obj, const std::string& context) {
    if (!obj.is_object()) throw ConfigError(context + " must be an object");
    reject_unknown_keys(obj, context,
                        {"method", "pro_speaker", "con_speaker", "pro_bundle", "con_bundle"});
    AxisSpec axis;
    std::string method = get_string(obj, context, "method");
    std::transform(method.begin(), method.end(), method.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    try {
        axis.method = scaling::axis_method_from_string(method);
    } catch (const ParseError& e) {
        throw ConfigError(context + ".method: " + e.what());
    }
    axis.pro_speaker = get_string_or(obj, context, "pro_speaker", "");
    axis.con_speaker = get_string_or(obj, context, "con_speaker", "");
    axis.pro_bundle = get_string_or(obj, context, "pro_bundle", "");
    axis.con_bundle = get_string_or(obj, context, "con_bundle", "");
    if (axis.method == scaling::AxisMethod::PAIR) {
        if (axis.pro_speaker.empty() || axis.con_speaker.empty()) {
            throw ConfigError(context + ": pair axes need pro_speaker and con_speaker");
        }
        if (!axis.pro_bundle.empty() || !axis.con_bundle.empty()) {
            throw ConfigError(context + ": bundle paths are only valid for generated axes");
        }
        if (axis.pro_speaker == axis.con_speaker) {
            throw ConfigError(context + ": pro_speaker and con_speaker must differ");
        }
    } else {
        if (axis.pro_bundle.empty() || axis.con_bundle.empty()) {
            throw ConfigError(context + ": generated axes need pro_bundle and con_bundle");
        }
        if (!axis.pro_speaker.empty() || !axis.con_speaker.empty()) {
            throw ConfigError(context + ": speaker names are only valid for pair axes");
        }
    }
    return axis;
}

TopicConfig parse_topic(const json& obj, std::size_t position) {
    const std::string context = "topics[" + std::to_string(position) + "]";
    if (!obj.is_object()) throw ConfigError(context + " must be an object");
    reject_unknown_keys(
        obj, context,
        {"topic_id", "query_words", "date_from", "date_to", "axis", "expert_path", "checks_path"});
    TopicConfig topic;
    topic.spec.topic_id = get_string(obj, context, "topic_id");
    if (!is_safe_file_token(topic.spec.topic_id)) {
        throw ConfigError(context + ".topic_id may only contain [A-Za-z0-9._-]; it names "
                          "the per-topic artifacts");
    }
    const auto& words = require(obj, context, "query_words");
    if (!words.is_array() || words.empty()) {
        throw ConfigError(context + ".query_words must be a nonempty array");
    }
    for (const auto& w : words) {
        if (!w.is_string() || w.get<std::string>().empty()) {
            throw ConfigError(context + ".query_words entries must be nonempty strings");
        }
        topic.spec.query_words.push_back(w.get<std::string>());
    }
    topic.spec.date_from = get_string(obj, context, "date_from");
    topic.spec.date_to = get_string(obj, context, "date_to");
    try {
        topic.spec.validate();
    } catch (const Error& e) {
        throw ConfigError(context + ": " + e.what());
    }
    topic.axis = parse_axis(require(obj, context, "axis"), context + ".axis");
    topic.expert_path = get_string(obj, context, "expert_path");
    if (topic.expert_path.empty()) {
        throw ConfigError(context + ".expert_path must not be empty");
    }
    topic.checks_path = get_string_or(obj, context, "checks_path", "");
    return topic;
}

}  // namespace

std::string to_string(ProviderKind k) {
    switch (k) {
        case ProviderKind::MOCK: return "mock";
        case ProviderKind::NGRAM: return "ngram";
        case ProviderKind::HTTP: return "http";
    }
    throw PreconditionError("unreachable provider kind");
}

ProviderKind provider_kind_from_string(const std::string& s) {
    if (s == "mock") return ProviderKind::MOCK;
    if (s == "ngram") return ProviderKind::NGRAM;
    if (s == "http") return ProviderKind::HTTP;
    throw ConfigError("unknown provider kind \"" + s + "\" (expected mock, ngram, or http)");
}

std::filesystem::path PipelineConfig::resolve(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.is_absolute()) return p;
    return base_dir / p;
}

PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(root, "config",
                        {"schema_version", "output_dir", "roster_path", "corpus_path",
                         "api_base_url", "provider", "classifier", "min_sentences",
                         "normalize_sentence_vectors", "reducer", "group_count", "topics_k",
                         "topics_terms", "token_dict_path", "stopwords_path", "party_statistic",
                         "topics"});
    const auto& version = require(root, "config", "schema_version");
    if (!version.is_number_integer() || version.get<int>() != 1) {
        throw ConfigError("unsupported config schema_version " + version.dump());
    }

    PipelineConfig config;
    config.base_dir = base_dir;
    config.output_dir = get_string(root, "config", "output_dir");
    if (config.output_dir.empty()) throw ConfigError("output_dir must not be empty");
    config.roster_path = get_string(root, "config", "roster_path");
    if (config.roster_path.empty()) throw ConfigError("roster_path must not be empty");
    config.corpus_path = get_string_or(root, "config", "corpus_path", "");
    config.api_base_url = get_string_or(root, "config", "api_base_url", config.api_base_url);
    config.provider = parse_provider(require(root, "config", "provider"));
    config.classifier = parse_classifier(require(root, "config", "classifier"));
    config.min_sentences = get_int_or(root, "config", "min_sentences", config.min_sentences);
    if (config.min_sentences < 1) throw ConfigError("min_sentences must be at least 1");
    config.normalize_sentence_vectors = get_bool_or(root, "config", "normalize_sentence_vectors",
                                                    config.normalize_sentence_vectors);
    if (root.contains("reducer")) config.reducer = parse_reducer(root.at("reducer"));
    config.group_count = get_int_or(root, "config", "group_count", config.group_count);
    if (config.group_count != 3) {
        throw ConfigError("group_count must be 3 (the LEFT/CENTER/RIGHT split)");
    }
    config.topics_k = get_int_or(root, "config", "topics_k", config.topics_k);
    if (config.topics_k < 1) throw ConfigError("topics_k must be at least 1");
    config.topics_terms = get_int_or(root, "config", "topics_terms", config.topics_terms);
    if (config.topics_terms < 1) throw ConfigError("topics_terms must be at least 1");
    config.token_dict_path = get_string_or(root, "config", "token_dict_path", "");
    config.stopwords_path = get_string_or(root, "config", "stopwords_path", "");
    if (root.contains("party_statistic")) {
        try {
            config.party_statistic = evalcmp::statistic_from_string(
                get_string(root, "config", "party_statistic"));
        } catch (const ParseError& e) {
            throw ConfigError(std::string("party_statistic: ") + e.what());
        }
    }

    const auto& topics = require(root, "config", "topics");
    if (!topics.is_array() || topics.empty()) {
        throw ConfigError("topics must be a nonempty array");
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < topics.size(); ++i) {
        auto topic = parse_topic(topics.at(i), i);
        if (!ids.insert(topic.spec.topic_id).second) {
            throw ConfigError("duplicate topic_id \"" + topic.spec.topic_id + "\"");
        }
        config.topics.push_back(std::move(topic));
    }
    return config;
}

PipelineConfig load_config(const std::filesystem::path& file) {
    std::string text;
    try {
        text = io::read_file(file);
    } catch (const Error& e) {
        throw ConfigError("cannot read config " + file.string() + ": " + e.what());
    }
    return parse_config(text, file.has_parent_path() ? file.parent_path()
                                                    : std::filesystem::path("."));
}

}  // namespace ideoaxis::pipeline
