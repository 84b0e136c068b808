#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ideoaxis/embedding/ops.hpp"
#include "ideoaxis/nlproc/types.hpp"

namespace ideoaxis::nlp {

// Multinomial linear model over sentence embeddings: softmax regression
// with a bias column, trained by full-batch gradient descent from a zero
// init, so training is deterministic for fixed (data, provider, options).
// Any fine-tuned external model can replace it behind the same weights-file
// interface.
class SentenceClassifier {
public:
    SentenceClassifier() = default;
    SentenceClassifier(std::string provider_id, std::size_t dimension,
                       std::vector<std::vector<double>> weights);

    const std::string& provider_id() const { return provider_id_; }
    std::size_t dimension() const { return dimension_; }
    const std::vector<std::vector<double>>& weights() const { return weights_; }

    // (label, confidence) for one embedded sentence; confidence is the
    // softmax top probability. Ties go to the lowest label ordinal.
    std::pair<SentenceLabel, double> decide(const std::vector<double>& embedding) const;

    void save(const std::filesystem::path& path) const;
    static SentenceClassifier load(const std::filesystem::path& path);

private:
    std::string provider_id_;
    std::size_t dimension_ = 0;
    // kNumLabels rows of (dimension + 1) columns, bias last.
    std::vector<std::vector<double>> weights_;
};

struct TrainOptions {
    std::uint64_t seed = 0;
    int epochs = 300;
    double learning_rate = 2.0;
    double l2 = 1e-4;
};

struct TrainReport {
    int n_train = 0;
    int n_eval = 0;
    std::optional<double> heldout_macro_f1;
};

// Throws PreconditionError when the training set has fewer than two
// distinct labels. When `eval` is given, the report carries held-out
// macro-F1.
SentenceClassifier train_classifier(const LabeledSet& train, emb::EmbeddingService& service,
                                    const TrainOptions& options = {},
                                    const LabeledSet* eval = nullptr,
                                    TrainReport* report = nullptr);

// One SentenceUnit per input sentence, order preserved. Throws
// DimensionError when the classifier and service disagree on the provider.
std::vector<SentenceUnit> classify(const std::vector<SentenceRef>& sentences,
                                   const SentenceClassifier& classifier,
                                   emb::EmbeddingService& service);

// Exactly the units labeled OPINION, order preserved.
std::vector<SentenceUnit> filter_opinions(const std::vector<SentenceUnit>& units);

// Deterministic shuffled split; train_fraction in (0, 1).
std::pair<LabeledSet, LabeledSet> split_labeled(const LabeledSet& all, double train_fraction,
                                                std::uint64_t seed);

// Macro-averaged F1 over all five labels (absent labels contribute 0).
double macro_f1(const std::vector<SentenceLabel>& gold, const std::vector<SentenceLabel>& pred);

// TSV with a required header row, columns (text, label).
LabeledSet load_labeled_tsv(const std::filesystem::path& path);

}  // namespace ideoaxis::nlp
