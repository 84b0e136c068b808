#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ideoaxis::io {

std::string read_file(const std::filesystem::path& path);

// Writes via a temp file in the same directory and renames into place,
// so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Splits on '\n', dropping a trailing empty line and CR remnants.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Shortest text form that parses back to the same double ("%.17g" fallback
// trimmed via round-trip probing); keeps tabular artifacts byte-stable.
std::string format_double(double v);

std::vector<std::string> split(std::string_view line, char sep);

}  // namespace ideoaxis::io
