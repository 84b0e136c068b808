#pragma once

#include <string>
#include <vector>

#include "ideoaxis/nlproc/types.hpp"

namespace ideoaxis::nlp {

// Splits a speech into sentences after the terminators 。！？ and their
// half-width equivalents ('.' only when followed by whitespace or end of
// text, so decimals survive). Terminators inside corner quotes 「」『』 do
// not split. Runs of terminators stay together. Segments are trimmed;
// empty segments are never emitted, and the concatenation of the output
// reproduces the input modulo boundary whitespace.
std::vector<std::string> segment(const std::string& speech_text);

// segment() plus the classification front door: drops sentences shorter
// than 4 code points after trimming and assigns contiguous indices.
std::vector<SentenceRef> prepare_sentences(const std::string& speech_id,
                                           const std::string& speech_text);

}  // namespace ideoaxis::nlp
