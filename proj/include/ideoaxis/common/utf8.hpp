#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ideoaxis::utf8 {

// Decodes the code point starting at byte offset i; advances i past it.
// Invalid sequences decode as U+FFFD and advance one byte.
char32_t decode(std::string_view s, std::size_t& i);

// Appends cp to out as UTF-8.
void encode(char32_t cp, std::string& out);

std::vector<char32_t> decode_all(std::string_view s);
std::string encode_all(const std::vector<char32_t>& cps);

std::size_t count_codepoints(std::string_view s);

// ASCII whitespace plus U+3000 (ideographic space).
bool is_space(char32_t cp);

bool is_hiragana(char32_t cp);
bool is_katakana(char32_t cp);   // includes the prolonged sound mark U+30FC
bool is_kanji(char32_t cp);      // CJK unified ideographs incl. ext. A
bool is_latin_or_digit(char32_t cp);

// Strips leading/trailing whitespace (ASCII + ideographic).
std::string trim(std::string_view s);

// trim() plus collapsing internal whitespace runs to nothing; used for
// speaker-name matching where sources disagree on spacing.
std::string strip_all_spaces(std::string_view s);

}  // namespace ideoaxis::utf8
