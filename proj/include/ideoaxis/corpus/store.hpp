#pragma once

#include <filesystem>
#include <vector>

#include "ideoaxis/corpus/types.hpp"

namespace ideoaxis::corpus {

// One JSON record per line, UTF-8, schema_version on every line. Identical
// record lists produce byte-identical files.
void store_corpus(const std::vector<SpeechRecord>& records, const std::filesystem::path& path);
std::vector<SpeechRecord> load_corpus(const std::filesystem::path& path);

// Roster file: single JSON object with entries and an alias table.
SpeakerRoster load_roster(const std::filesystem::path& path);
void save_roster(const SpeakerRoster& roster, const std::filesystem::path& path);

}  // namespace ideoaxis::corpus
