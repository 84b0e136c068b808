#include <algorithm>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"
#include "ideoaxis/common/utf8.hpp"
#include "ideoaxis/topics/topics.hpp"

namespace ideoaxis::topics {

namespace {

enum class Script { HIRAGANA, KATAKANA, KANJI, LATIN, OTHER };

Script script_of(char32_t cp) {
    if (utf8::is_hiragana(cp)) return Script::HIRAGANA;
    if (utf8::is_katakana(cp)) return Script::KATAKANA;
    if (utf8::is_kanji(cp)) return Script::KANJI;
    if (utf8::is_latin_or_digit(cp)) return Script::LATIN;
    return Script::OTHER;
}

// ASCII lowercasing plus fullwidth alphanumerics folded to halfwidth, so
// "ＮＡＴＯ" and "NATO" count as the same term.
char32_t fold(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp - U'A' + U'a';
    if (cp >= 0xFF10 && cp <= 0xFF19) return cp - 0xFF10 + U'0';
    if (cp >= 0xFF21 && cp <= 0xFF3A) return cp - 0xFF21 + U'a';
    if (cp >= 0xFF41 && cp <= 0xFF5A) return cp - 0xFF41 + U'a';
    return cp;
}

std::string make_token(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) utf8::encode(fold(cps[i]), out);
    return out;
}

// Kanji runs longer than three characters carry no word boundaries we can
// trust, so they are tiled into bigrams (final tile absorbs an odd leftover).
void emit_run(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end, Script script,
              std::vector<std::string>& tokens) {
    if (begin >= end) return;
    if (script == Script::KANJI && end - begin > 3) {
        std::size_t i = begin;
        while (end - i > 3) {
            tokens.push_back(make_token(cps, i, i + 2));
            i += 2;
        }
        tokens.push_back(make_token(cps, i, end));
    } else {
        tokens.push_back(make_token(cps, begin, end));
    }
}

}  // namespace

Tokenizer::Tokenizer(std::vector<std::string> dictionary, std::vector<std::string> stopwords) {
    for (auto& term : dictionary) {
        if (term.empty()) continue;
        max_dict_points_ = std::max(max_dict_points_, utf8::count_codepoints(term));
        dictionary_.insert(std::move(term));
    }
    for (auto& term : stopwords) {
        if (term.empty()) continue;
        stopwords_.insert(std::move(term));
    }
}

std::vector<std::string> Tokenizer::tokenize(const std::string& text) const {
    const auto cps = utf8::decode_all(text);
    std::vector<std::string> tokens;

    std::size_t run_begin = 0;
    Script run_script = Script::OTHER;
    bool in_run = false;
    auto flush_run = [&](std::size_t end) {
        if (!in_run) return;
        in_run = false;
        emit_run(cps, run_begin, end, run_script, tokens);
    };

    std::size_t i = 0;
    while (i < cps.size()) {
        // Longest dictionary match wins over script-run accumulation.
        std::size_t matched_len = 0;
        std::string matched_term;
        if (!dictionary_.empty()) {
            const std::size_t cap = std::min(max_dict_points_, cps.size() - i);
            std::string prefix;
            for (std::size_t len = 1; len <= cap; ++len) {
                utf8::encode(cps[i + len - 1], prefix);
                if (dictionary_.count(prefix) > 0) {
                    matched_len = len;
                    matched_term = prefix;
                }
            }
        }
        if (matched_len > 0) {
            flush_run(i);
            tokens.push_back(std::move(matched_term));
            i += matched_len;
            continue;
        }

        const Script script = script_of(cps[i]);
        if (script == Script::OTHER) {
            flush_run(i);
            ++i;
            continue;
        }
        if (!in_run) {
            in_run = true;
            run_begin = i;
            run_script = script;
        } else if (script != run_script) {
            flush_run(i);
            in_run = true;
            run_begin = i;
            run_script = script;
        }
        ++i;
    }
    flush_run(cps.size());

    if (stopwords_enabled_) {
        std::erase_if(tokens,
                      [this](const std::string& t) { return stopwords_.count(t) > 0; });
    }
    return tokens;
}

bool Tokenizer::is_stopword(const std::string& term) const {
    return stopwords_.count(term) > 0;
}

std::vector<std::string> load_term_list(const std::string& path) {
    std::vector<std::string> terms;
    for (const auto& raw : io::read_lines(path)) {
        auto line = utf8::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        terms.push_back(std::move(line));
    }
    return terms;
}

Tokenizer load_tokenizer(const std::string& dict_path, const std::string& stop_path) {
    return Tokenizer(load_term_list(dict_path), load_term_list(stop_path));
}

}  // namespace ideoaxis::topics
