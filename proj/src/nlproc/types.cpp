#include "ideoaxis/nlproc/types.hpp"

#include "ideoaxis/common/error.hpp"

namespace ideoaxis::nlp {

std::string to_string(SentenceLabel label) {
    switch (label) {
        case SentenceLabel::OPINION: return "OPINION";
        case SentenceLabel::FACT: return "FACT";
        case SentenceLabel::QUESTION: return "QUESTION";
        case SentenceLabel::DESCRIPTION: return "DESCRIPTION";
        case SentenceLabel::OTHER: return "OTHER";
    }
    throw PreconditionError("unknown SentenceLabel ordinal");
}

SentenceLabel label_from_string(const std::string& text) {
    if (text == "OPINION") return SentenceLabel::OPINION;
    if (text == "FACT") return SentenceLabel::FACT;
    if (text == "QUESTION") return SentenceLabel::QUESTION;
    if (text == "DESCRIPTION") return SentenceLabel::DESCRIPTION;
    if (text == "OTHER") return SentenceLabel::OTHER;
    throw ParseError("label", "unknown sentence label \"" + text + "\"");
}

}  // namespace ideoaxis::nlp
