#pragma once

#include <string>
#include <vector>

namespace ideoaxis::nlp {

// Sentence types, in fixed ordinal order; argmax ties resolve to the
// lowest ordinal.
enum class SentenceLabel { OPINION, FACT, QUESTION, DESCRIPTION, OTHER };

inline constexpr int kNumLabels = 5;

std::string to_string(SentenceLabel label);
SentenceLabel label_from_string(const std::string& s);

// A segmented sentence positioned within its speech.
struct SentenceRef {
    std::string speech_id;
    int index = 0;
    std::string text;
};

struct SentenceUnit {
    std::string speech_id;
    int index = 0;
    std::string text;
    SentenceLabel label = SentenceLabel::OTHER;
    double confidence = 0.0;
};

struct LabeledExample {
    std::string text;
    SentenceLabel label = SentenceLabel::OTHER;
};

struct LabeledSet {
    std::vector<LabeledExample> items;
    std::string provenance;
};

}  // namespace ideoaxis::nlp
