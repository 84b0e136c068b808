#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ideoaxis/common/hashing.hpp"
#include "ideoaxis/common/io.hpp"
#include "ideoaxis/common/utf8.hpp"

using namespace ideoaxis;

TEST_CASE("utf8 round trip and counting") {
    const std::string s = "自衛隊を憲法に明記する。ABC 123";
    auto cps = utf8::decode_all(s);
    CHECK(utf8::encode_all(cps) == s);
    CHECK(utf8::count_codepoints("原発") == 2);
    CHECK(utf8::count_codepoints("abc") == 3);
}

TEST_CASE("utf8 trim handles ideographic space") {
    CHECK(utf8::trim("　 こんにちは 　") == "こんにちは");
    CHECK(utf8::trim("   ") == "");
    CHECK(utf8::strip_all_spaces("稲田 朋美") == "稲田朋美");
    CHECK(utf8::strip_all_spaces("稲田　朋美") == "稲田朋美");
}

TEST_CASE("utf8 script classes") {
    CHECK(utf8::is_kanji(U'原'));
    CHECK(utf8::is_hiragana(U'の'));
    CHECK(utf8::is_katakana(U'ベ'));
    CHECK(utf8::is_katakana(0x30FC));  // prolonged sound mark
    CHECK(utf8::is_latin_or_digit(U'a'));
    CHECK_FALSE(utf8::is_kanji(U'a'));
}

TEST_CASE("fnv1a64 known vectors") {
    // Reference values for the standard FNV-1a 64-bit parameters.
    CHECK(hashing::fnv1a64("") == 14695981039346656037ull);
    CHECK(hashing::fnv1a64("a") == 12638187200555641996ull);
}

TEST_CASE("sha256 known vector") {
    CHECK(hashing::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(hashing::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("format_double round trips") {
    for (double v : {0.5, 1.0 / 3.0, 1e-9, 123456.789, -0.0, 2.2250738585072014e-308}) {
        CHECK(std::stod(io::format_double(v)) == v);
    }
}

TEST_CASE("atomic write then read") {
    auto dir = std::filesystem::temp_directory_path() / "ideoaxis_test_io";
    std::filesystem::create_directories(dir);
    auto path = dir / "x.txt";
    io::write_file_atomic(path, "line1\nline2\n");
    CHECK(io::read_file(path) == "line1\nline2\n");
    auto lines = io::read_lines(path);
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "line2");
    std::filesystem::remove_all(dir);
}

TEST_CASE("split on tabs keeps empty fields") {
    auto f = io::split("a\t\tb", '\t');
    REQUIRE(f.size() == 3);
    CHECK(f[1] == "");
}
