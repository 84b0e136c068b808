#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/topics/topics.hpp"

namespace ideoaxis::topics {

CtfidfResult ctfidf(const std::vector<std::vector<std::string>>& classes) {
    if (classes.empty()) throw PreconditionError("ctfidf requires at least one class");
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c].empty()) {
            throw PreconditionError("ctfidf class " + std::to_string(c) +
                                    " is empty; every class needs at least one term");
        }
    }

    // f(t): corpus-wide term counts. std::map keeps the term order sorted.
    std::map<std::string, double> corpus_count;
    double total_terms = 0.0;
    for (const auto& cls : classes) {
        for (const auto& term : cls) {
            corpus_count[term] += 1.0;
            total_terms += 1.0;
        }
    }
    const double a = total_terms / static_cast<double>(classes.size());

    CtfidfResult result;
    result.terms.reserve(corpus_count.size());
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& [term, count] : corpus_count) {
        index.emplace(term, result.terms.size());
        result.terms.push_back(term);
    }

    result.scores.assign(classes.size(), std::vector<double>(result.terms.size(), 0.0));
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::unordered_map<std::string, double> tf;
        for (const auto& term : classes[c]) tf[term] += 1.0;
        for (const auto& [term, count] : tf) {
            const std::size_t j = index.at(term);
            result.scores[c][j] = count * std::log1p(a / corpus_count.at(term));
        }
    }
    return result;
}

std::vector<std::vector<std::pair<std::string, double>>> top_terms(const CtfidfResult& result,
                                                                   std::size_t t) {
    if (t == 0) throw PreconditionError("term count must be at least 1");
    std::vector<std::vector<std::pair<std::string, double>>> out(result.scores.size());
    for (std::size_t c = 0; c < result.scores.size(); ++c) {
        std::vector<std::pair<std::string, double>> present;
        for (std::size_t j = 0; j < result.terms.size(); ++j) {
            if (result.scores[c][j] > 0.0) present.emplace_back(result.terms[j], result.scores[c][j]);
        }
        std::sort(present.begin(), present.end(), [](const auto& lhs, const auto& rhs) {
            if (lhs.second != rhs.second) return lhs.second > rhs.second;
            return lhs.first < rhs.first;
        });
        if (present.size() > t) present.resize(t);
        out[c] = std::move(present);
    }
    return out;
}

}  // namespace ideoaxis::topics
