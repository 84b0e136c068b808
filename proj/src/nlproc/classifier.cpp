#include "ideoaxis/nlproc/classifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"
#include "nlohmann/json.hpp"

namespace ideoaxis::nlp {

namespace {

constexpr int kWeightsSchemaVersion = 1;

// Embeds every text through the service and packs the vectors (plus a
// trailing bias column of ones) into an n x (d+1) matrix.
Eigen::MatrixXd design_matrix(const std::vector<std::string>& texts,
                              emb::EmbeddingService& service) {
    const auto vectors = service.embed_batch(texts);
    const std::size_t d = service.descriptor().dimension;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(vectors.size()),
                      static_cast<Eigen::Index>(d + 1));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i].values[j];
        }
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = 1.0;
    }
    return x;
}

// Row-wise stable softmax, in place.
void softmax_rows(Eigen::MatrixXd& z) {
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const double m = z.row(r).maxCoeff();
        z.row(r) = (z.row(r).array() - m).exp();
        z.row(r) /= z.row(r).sum();
    }
}

std::vector<SentenceLabel> canonical_labels() {
    return {SentenceLabel::OPINION, SentenceLabel::FACT, SentenceLabel::QUESTION,
            SentenceLabel::DESCRIPTION, SentenceLabel::OTHER};
}

}  // namespace

SentenceClassifier::SentenceClassifier(std::string provider_id, std::size_t dimension,
                                       std::vector<std::vector<double>> weights)
    : provider_id_(std::move(provider_id)), dimension_(dimension), weights_(std::move(weights)) {
    if (weights_.size() != static_cast<std::size_t>(kNumLabels)) {
        throw DimensionError("classifier expects " + std::to_string(kNumLabels) +
                             " weight rows, got " + std::to_string(weights_.size()));
    }
    for (const auto& row : weights_) {
        if (row.size() != dimension_ + 1) {
            throw DimensionError("classifier weight row has " + std::to_string(row.size()) +
                                 " columns, expected " + std::to_string(dimension_ + 1) +
                                 " (dimension + bias)");
        }
    }
}

std::pair<SentenceLabel, double> SentenceClassifier::decide(
    const std::vector<double>& embedding) const {
    if (embedding.size() != dimension_) {
        throw DimensionError("embedding has dimension " + std::to_string(embedding.size()) +
                             ", classifier expects " + std::to_string(dimension_));
    }
    double logits[kNumLabels];
    for (int k = 0; k < kNumLabels; ++k) {
        double acc = weights_[static_cast<std::size_t>(k)][dimension_];  // bias
        for (std::size_t j = 0; j < dimension_; ++j) {
            acc += weights_[static_cast<std::size_t>(k)][j] * embedding[j];
        }
        logits[k] = acc;
    }
    // Lowest ordinal wins ties, so only a strictly greater logit displaces.
    int best = 0;
    for (int k = 1; k < kNumLabels; ++k) {
        if (logits[k] > logits[best]) best = k;
    }
    double denom = 0.0;
    for (int k = 0; k < kNumLabels; ++k) denom += std::exp(logits[k] - logits[best]);
    return {static_cast<SentenceLabel>(best), 1.0 / denom};
}

void SentenceClassifier::save(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["schema_version"] = kWeightsSchemaVersion;
    j["kind"] = "sentence-classifier";
    j["provider_id"] = provider_id_;
    j["dimension"] = dimension_;
    nlohmann::json labels = nlohmann::json::array();
    for (SentenceLabel label : canonical_labels()) labels.push_back(to_string(label));
    j["labels"] = labels;
    j["weights"] = weights_;
    io::write_file_atomic(path, j.dump(2) + "\n");
}

SentenceClassifier SentenceClassifier::load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw NotFoundError("classifier weights file not found: " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("weights", "cannot parse " + path.string() + ": " + e.what());
    }
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kWeightsSchemaVersion) {
            throw SchemaVersionError("classifier weights schema_version " +
                                     std::to_string(version) + " unsupported (expected " +
                                     std::to_string(kWeightsSchemaVersion) + ")");
        }
        if (j.at("kind").get<std::string>() != "sentence-classifier") {
            throw ParseError("kind", path.string() + " is not a sentence-classifier file");
        }
        const auto labels = j.at("labels").get<std::vector<std::string>>();
        std::size_t k = 0;
        for (SentenceLabel label : canonical_labels()) {
            if (k >= labels.size() || labels[k] != to_string(label)) {
                throw ParseError("labels", "label order in " + path.string() +
                                               " does not match this build");
            }
            ++k;
        }
        if (labels.size() != static_cast<std::size_t>(kNumLabels)) {
            throw ParseError("labels", "expected " + std::to_string(kNumLabels) + " labels");
        }
        return SentenceClassifier(j.at("provider_id").get<std::string>(),
                                  j.at("dimension").get<std::size_t>(),
                                  j.at("weights").get<std::vector<std::vector<double>>>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("weights", "malformed classifier file " + path.string() + ": " +
                                        e.what());
    }
}

SentenceClassifier train_classifier(const LabeledSet& train, emb::EmbeddingService& service,
                                    const TrainOptions& options, const LabeledSet* eval,
                                    TrainReport* report) {
    if (train.items.empty()) throw PreconditionError("training set is empty");
    bool seen[kNumLabels] = {};
    int distinct = 0;
    for (const auto& item : train.items) {
        bool& flag = seen[static_cast<int>(item.label)];
        if (!flag) {
            flag = true;
            ++distinct;
        }
    }
    if (distinct < 2) {
        throw PreconditionError("training set has a single label; need at least two classes");
    }

    std::vector<std::string> texts;
    texts.reserve(train.items.size());
    for (const auto& item : train.items) texts.push_back(item.text);
    const Eigen::MatrixXd x = design_matrix(texts, service);
    const Eigen::Index n = x.rows();
    const Eigen::Index cols = x.cols();

    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, kNumLabels);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i, static_cast<int>(train.items[static_cast<std::size_t>(i)].label)) = 1.0;
    }

    // Zero init + full-batch descent: the optimization has no randomness,
    // so results depend only on (data, provider, options). The seed is
    // carried for provenance and for stochastic variants.
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(kNumLabels, cols);
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        Eigen::MatrixXd p = x * w.transpose();  // n x K logits
        softmax_rows(p);
        Eigen::MatrixXd grad = (p - y).transpose() * x / static_cast<double>(n);
        grad.leftCols(cols - 1) += options.l2 * w.leftCols(cols - 1);  // bias unregularized
        w -= options.learning_rate * grad;
    }

    std::vector<std::vector<double>> rows(static_cast<std::size_t>(kNumLabels));
    for (int k = 0; k < kNumLabels; ++k) {
        rows[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(cols));
        for (Eigen::Index j = 0; j < cols; ++j) {
            rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = w(k, j);
        }
    }
    SentenceClassifier model(service.descriptor().provider_id,
                             service.descriptor().dimension, std::move(rows));

    if (report != nullptr) {
        report->n_train = static_cast<int>(n);
        report->n_eval = 0;
        report->heldout_macro_f1.reset();
    }
    if (eval != nullptr && !eval->items.empty()) {
        std::vector<std::string> eval_texts;
        eval_texts.reserve(eval->items.size());
        for (const auto& item : eval->items) eval_texts.push_back(item.text);
        const auto vectors = service.embed_batch(eval_texts);
        std::vector<SentenceLabel> gold, pred;
        gold.reserve(eval->items.size());
        pred.reserve(eval->items.size());
        for (std::size_t i = 0; i < eval->items.size(); ++i) {
            gold.push_back(eval->items[i].label);
            pred.push_back(model.decide(vectors[i].values).first);
        }
        if (report != nullptr) {
            report->n_eval = static_cast<int>(eval->items.size());
            report->heldout_macro_f1 = macro_f1(gold, pred);
        }
    }
    return model;
}

std::vector<SentenceUnit> classify(const std::vector<SentenceRef>& sentences,
                                   const SentenceClassifier& classifier,
                                   emb::EmbeddingService& service) {
    const auto& desc = service.descriptor();
    if (desc.provider_id != classifier.provider_id()) {
        throw PreconditionError("classifier was trained with provider \"" +
                                classifier.provider_id() + "\" but the service uses \"" +
                                desc.provider_id + "\"");
    }
    if (desc.dimension != classifier.dimension()) {
        throw DimensionError("classifier dimension " + std::to_string(classifier.dimension()) +
                             " does not match provider dimension " +
                             std::to_string(desc.dimension));
    }
    if (sentences.empty()) return {};
    std::vector<std::string> texts;
    texts.reserve(sentences.size());
    for (const auto& s : sentences) texts.push_back(s.text);
    const auto vectors = service.embed_batch(texts);
    std::vector<SentenceUnit> units;
    units.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto [label, confidence] = classifier.decide(vectors[i].values);
        units.push_back(SentenceUnit{sentences[i].speech_id, sentences[i].index,
                                     sentences[i].text, label, confidence});
    }
    return units;
}

std::vector<SentenceUnit> filter_opinions(const std::vector<SentenceUnit>& units) {
    std::vector<SentenceUnit> kept;
    for (const auto& unit : units) {
        if (unit.label == SentenceLabel::OPINION) kept.push_back(unit);
    }
    return kept;
}

std::pair<LabeledSet, LabeledSet> split_labeled(const LabeledSet& all, double train_fraction,
                                                std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw PreconditionError("train_fraction must lie strictly between 0 and 1");
    }
    const std::size_t n = all.items.size();
    if (n < 2) throw PreconditionError("need at least 2 items to split");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    // Explicit Fisher-Yates: std::shuffle's draw sequence is
    // implementation-defined, and the split must be stable across
    // standard libraries.
    std::mt19937_64 rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(order[i], order[j]);
    }

    std::size_t n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

    LabeledSet train, eval;
    train.provenance = all.provenance;
    eval.provenance = all.provenance;
    train.items.reserve(n_train);
    eval.items.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
        (i < n_train ? train : eval).items.push_back(all.items[order[i]]);
    }
    return {std::move(train), std::move(eval)};
}

double macro_f1(const std::vector<SentenceLabel>& gold, const std::vector<SentenceLabel>& pred) {
    if (gold.size() != pred.size()) {
        throw PreconditionError("gold and predicted label lists differ in length");
    }
    if (gold.empty()) throw PreconditionError("cannot score an empty label list");
    double tp[kNumLabels] = {}, fp[kNumLabels] = {}, fn[kNumLabels] = {};
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const int g = static_cast<int>(gold[i]);
        const int p = static_cast<int>(pred[i]);
        if (g == p) {
            tp[g] += 1.0;
        } else {
            fn[g] += 1.0;
            fp[p] += 1.0;
        }
    }
    double total = 0.0;
    for (int k = 0; k < kNumLabels; ++k) {
        const double precision = tp[k] + fp[k] > 0.0 ? tp[k] / (tp[k] + fp[k]) : 0.0;
        const double recall = tp[k] + fn[k] > 0.0 ? tp[k] / (tp[k] + fn[k]) : 0.0;
        total += precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return total / kNumLabels;
}

LabeledSet load_labeled_tsv(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw NotFoundError("labeled data file not found: " + path.string());
    }
    const auto lines = io::read_lines(path);
    if (lines.empty() || lines[0] != "text\tlabel") {
        throw ParseError("header", path.string() + " must start with a \"text\\tlabel\" header");
    }
    LabeledSet set;
    set.provenance = path.string();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = io::split(lines[i], '\t');
        if (fields.size() != 2) {
            throw ParseError("row", path.string() + ":" + std::to_string(i + 1) +
                                        ": expected 2 tab-separated fields, got " +
                                        std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw ParseError("text", path.string() + ":" + std::to_string(i + 1) +
                                         ": empty sentence text");
        }
        set.items.push_back(LabeledExample{fields[0], label_from_string(fields[1])});
    }
    if (set.items.empty()) {
        throw ParseError("rows", path.string() + " contains a header but no labeled rows");
    }
    return set;
}

}  // namespace ideoaxis::nlp
