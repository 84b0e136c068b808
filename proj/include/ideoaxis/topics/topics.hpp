#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ideoaxis/reduce/reduce.hpp"
#include "ideoaxis/scaling/types.hpp"

namespace ideoaxis::topics {

// Deterministic Japanese-first tokenizer: longest match against a content-word
// dictionary, falling back to script runs (kana runs whole, kanji runs tiled
// into bigrams past three characters, Latin/digit runs lowercased). A stop-term
// list is applied last and can be disabled to inspect raw output.
class Tokenizer {
public:
    Tokenizer() = default;
    Tokenizer(std::vector<std::string> dictionary, std::vector<std::string> stopwords);

    std::vector<std::string> tokenize(const std::string& text) const;

    bool is_stopword(const std::string& term) const;
    void set_stopwords_enabled(bool enabled) { stopwords_enabled_ = enabled; }
    bool stopwords_enabled() const { return stopwords_enabled_; }

    std::size_t dictionary_size() const { return dictionary_.size(); }

private:
    std::unordered_set<std::string> dictionary_;
    std::unordered_set<std::string> stopwords_;
    std::size_t max_dict_points_ = 0;  // longest dictionary entry, in code points
    bool stopwords_enabled_ = true;
};

// Loads one term per line; blank lines and lines starting with '#' skipped.
std::vector<std::string> load_term_list(const std::string& path);
Tokenizer load_tokenizer(const std::string& dict_path, const std::string& stop_path);

// Seeded k-means++ over 2D points. Labels are renumbered by first occurrence,
// so label 0 is the cluster of the earliest point. Every point gets a label.
std::vector<int> cluster_points(const std::vector<std::array<double, 2>>& points, int k,
                                std::uint64_t seed);

// Class-based TF-IDF: W(t,c) = tf(t,c) * ln(1 + A / f(t)) with A the average
// term count per class and f(t) the corpus-wide count of t.
struct CtfidfResult {
    std::vector<std::string> terms;            // sorted lexicographically
    std::vector<std::vector<double>> scores;   // [class][term index]
};

CtfidfResult ctfidf(const std::vector<std::vector<std::string>>& classes);

// T highest-scoring terms per class; ties broken lexicographically. Shorter
// than T when a class's corpus has fewer distinct terms.
std::vector<std::vector<std::pair<std::string, double>>> top_terms(const CtfidfResult& result,
                                                                   std::size_t t);

struct TopicSummary {
    scaling::Group group = scaling::Group::LEFT;
    int topic_index = 0;
    std::vector<std::pair<std::string, double>> top_terms;
    int n_sentences = 0;

    bool operator==(const TopicSummary&) const = default;
};

struct GroupTopics {
    scaling::Group group = scaling::Group::LEFT;
    int n_sentences = 0;
    std::vector<TopicSummary> topics;       // empty when error is set
    std::optional<std::string> error;       // why this group produced no topics

    bool operator==(const GroupTopics&) const = default;
};

struct TopicsReport {
    std::vector<GroupTopics> groups;
    int k = 5;
    int terms = 10;
    std::uint64_t seed = 0;
    reduce::Method reducer = reduce::Method::PCA;

    bool operator==(const TopicsReport&) const = default;
};

struct GroupSentences {
    scaling::Group group = scaling::Group::LEFT;
    std::vector<std::string> sentences;
    std::vector<std::vector<double>> vectors;  // one embedding per sentence
};

struct TopicsOptions {
    int k = 5;
    int terms = 10;
    std::uint64_t seed = 0;
    reduce::Method reducer = reduce::Method::PCA;
    reduce::UmapParams umap;
};

// Per group: 2D-reduce the sentence embeddings, cluster, then score each
// cluster's tokens with c-TF-IDF. A group that cannot be processed (too few
// sentences for k, degenerate geometry, ...) gets an error entry; the other
// groups are unaffected.
TopicsReport topics_report(const std::vector<GroupSentences>& groups, const Tokenizer& tokenizer,
                           const TopicsOptions& options = {});

// Machine-readable table: "# key=value" metadata and per-group status lines,
// then tab-separated (group, topic_index, rank, term, score) rows. Scores are
// printed shortest-exact, so parse_topics_tsv(render_topics_tsv(r)) == r.
std::string render_topics_tsv(const TopicsReport& report);
TopicsReport parse_topics_tsv(const std::string& text);

// Human-readable rendering: one column per group, one row per topic with the
// terms joined by commas.
std::string render_topics_text(const TopicsReport& report);

}  // namespace ideoaxis::topics
