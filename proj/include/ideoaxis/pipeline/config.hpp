#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ideoaxis/corpus/types.hpp"
#include "ideoaxis/evalcmp/evalcmp.hpp"
#include "ideoaxis/nlproc/classifier.hpp"
#include "ideoaxis/reduce/reduce.hpp"
#include "ideoaxis/scaling/types.hpp"

namespace ideoaxis::pipeline {

enum class ProviderKind { MOCK, NGRAM, HTTP };

std::string to_string(ProviderKind k);
ProviderKind provider_kind_from_string(const std::string& s);

struct ProviderConfig {
    ProviderKind kind = ProviderKind::NGRAM;
    std::size_t dimension = 256;
    std::uint64_t seed = 0;       // mock only
    std::string base_url;         // http only
    std::string provider_id;      // http only; local kinds derive their own id
};

// Exactly one of weights_path / train_from is set: either a ready-made
// weights file or a labeled TSV to train from (weights then land in the
// output directory).
struct ClassifierConfig {
    std::string weights_path;
    std::string train_from;
    nlp::TrainOptions train;
};

struct AxisSpec {
    scaling::AxisMethod method = scaling::AxisMethod::PAIR;
    std::string pro_speaker;  // PAIR
    std::string con_speaker;
    std::string pro_bundle;   // GENERATED: seed-bundle paths
    std::string con_bundle;
};

struct ReducerConfig {
    reduce::Method method = reduce::Method::PCA;
    std::uint64_t seed = 0;
    reduce::UmapParams umap;
};

struct TopicConfig {
    corpus::TopicSpec spec;
    AxisSpec axis;
    std::string expert_path;
    std::string checks_path;  // optional; empty = no configured sign checks
};

struct PipelineConfig {
    std::filesystem::path base_dir;  // directory of the config file; resolves relative paths
    std::string output_dir;
    std::string roster_path;
    std::string corpus_path;  // offline speech source; required for --offline runs
    std::string api_base_url = "https://kokkai.ndl.go.jp";
    ProviderConfig provider;
    ClassifierConfig classifier;
    int min_sentences = 3;
    bool normalize_sentence_vectors = false;
    ReducerConfig reducer;
    int group_count = 3;
    int topics_k = 5;
    int topics_terms = 10;
    std::string token_dict_path;  // optional tokenizer data
    std::string stopwords_path;
    evalcmp::Statistic party_statistic = evalcmp::Statistic::MEDIAN;
    std::vector<TopicConfig> topics;

    std::filesystem::path resolve(const std::string& path) const;
    std::filesystem::path out() const { return resolve(output_dir); }
};

// Strict parse: unknown keys anywhere are a ConfigError, as are missing
// required keys, wrong types, duplicate topic ids, and invalid enum values.
PipelineConfig load_config(const std::filesystem::path& file);
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

}  // namespace ideoaxis::pipeline
