#include "ideoaxis/nlproc/segmenter.hpp"

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/utf8.hpp"

namespace ideoaxis::nlp {

namespace {

bool is_open_quote(char32_t cp) { return cp == 0x300C || cp == 0x300E; }   // 「 『
bool is_close_quote(char32_t cp) { return cp == 0x300D || cp == 0x300F; }  // 」 』

bool is_hard_terminator(char32_t cp) {
    return cp == 0x3002 /* 。 */ || cp == 0xFF01 /* ！ */ || cp == 0xFF1F /* ？ */ ||
           cp == U'!' || cp == U'?';
}

}  // namespace

std::vector<std::string> segment(const std::string& speech_text) {
    if (speech_text.empty()) throw PreconditionError("segment: empty speech text");

    const auto cps = utf8::decode_all(speech_text);
    std::vector<std::string> out;
    std::size_t start = 0;
    int quote_depth = 0;

    auto emit = [&](std::size_t end) {
        if (end <= start) return;
        std::string seg = utf8::encode_all(
            {cps.begin() + static_cast<std::ptrdiff_t>(start),
             cps.begin() + static_cast<std::ptrdiff_t>(end)});
        seg = utf8::trim(seg);
        if (!seg.empty()) out.push_back(std::move(seg));
        start = end;
    };

    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i];
        if (is_open_quote(cp)) {
            ++quote_depth;
            continue;
        }
        if (is_close_quote(cp)) {
            if (quote_depth > 0) --quote_depth;
            continue;
        }
        if (quote_depth > 0) continue;

        bool terminator = is_hard_terminator(cp);
        if (!terminator && cp == U'.') {
            const bool at_end = i + 1 == cps.size();
            terminator = at_end || utf8::is_space(cps[i + 1]);
        }
        if (!terminator) continue;

        // Absorb a run of terminators ("？！", "。。。") into one boundary.
        std::size_t j = i;
        while (j + 1 < cps.size() &&
               (is_hard_terminator(cps[j + 1]) || cps[j + 1] == U'.'))
            ++j;
        emit(j + 1);
        i = j;
    }
    emit(cps.size());
    return out;
}

std::vector<SentenceRef> prepare_sentences(const std::string& speech_id,
                                           const std::string& speech_text) {
    std::vector<SentenceRef> refs;
    int index = 0;
    for (auto& s : segment(speech_text)) {
        if (utf8::count_codepoints(s) < 4) continue;  // segmentation artifacts
        refs.push_back(SentenceRef{speech_id, index++, std::move(s)});
    }
    return refs;
}

}  // namespace ideoaxis::nlp
