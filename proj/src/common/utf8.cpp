#include "ideoaxis/common/utf8.hpp"

namespace ideoaxis::utf8 {

char32_t decode(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    auto cont = [&](std::size_t k) {
        return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    auto cb = [&](std::size_t k) { return static_cast<char32_t>(s[i + k]) & 0x3F; };
    if ((b0 & 0xE0) == 0xC0 && cont(1)) {
        char32_t cp = ((b0 & 0x1Fu) << 6) | cb(1);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        char32_t cp = ((b0 & 0x0Fu) << 12) | (cb(1) << 6) | cb(2);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        char32_t cp = ((b0 & 0x07u) << 18) | (cb(1) << 12) | (cb(2) << 6) | cb(3);
        i += 4;
        return cp;
    }
    ++i;
    return 0xFFFD;
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::vector<char32_t> decode_all(std::string_view s) {
    std::vector<char32_t> cps;
    cps.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) cps.push_back(decode(s, i));
    return cps;
}

std::string encode_all(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 3);
    for (char32_t cp : cps) encode(cp, out);
    return out;
}

std::size_t count_codepoints(std::string_view s) {
    std::size_t i = 0, n = 0;
    while (i < s.size()) {
        decode(s, i);
        ++n;
    }
    return n;
}

bool is_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' ||
           cp == U'\v' || cp == 0x3000;
}

bool is_hiragana(char32_t cp) { return cp >= 0x3041 && cp <= 0x3096; }

bool is_katakana(char32_t cp) {
    return (cp >= 0x30A1 && cp <= 0x30FA) || cp == 0x30FC || (cp >= 0xFF66 && cp <= 0xFF9D);
}

bool is_kanji(char32_t cp) {
    return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) || cp == 0x3005;
}

bool is_latin_or_digit(char32_t cp) {
    return (cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z') ||
           (cp >= 0xFF10 && cp <= 0xFF19) || (cp >= 0xFF21 && cp <= 0xFF3A) ||
           (cp >= 0xFF41 && cp <= 0xFF5A);
}

std::string trim(std::string_view s) {
    auto cps = decode_all(s);
    std::size_t a = 0, b = cps.size();
    while (a < b && is_space(cps[a])) ++a;
    while (b > a && is_space(cps[b - 1])) --b;
    return encode_all({cps.begin() + static_cast<std::ptrdiff_t>(a),
                       cps.begin() + static_cast<std::ptrdiff_t>(b)});
}

std::string strip_all_spaces(std::string_view s) {
    auto cps = decode_all(s);
    std::vector<char32_t> kept;
    kept.reserve(cps.size());
    for (char32_t cp : cps)
        if (!is_space(cp)) kept.push_back(cp);
    return encode_all(kept);
}

}  // namespace ideoaxis::utf8
