#include "ideoaxis/corpus/store.hpp"

#include <string>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"
#include "nlohmann/json.hpp"

namespace ideoaxis::corpus {

namespace {

constexpr int kCorpusSchemaVersion = 1;
constexpr int kRosterSchemaVersion = 1;

void check_schema_version(const nlohmann::json& j, int expected, const std::string& where) {
    if (!j.contains("schema_version")) {
        throw ParseError("schema_version", where + ": missing schema_version");
    }
    const int version = j.at("schema_version").get<int>();
    if (version != expected) {
        throw SchemaVersionError(where + ": schema_version " + std::to_string(version) +
                                 " unsupported (expected " + std::to_string(expected) + ")");
    }
}

}  // namespace

void store_corpus(const std::vector<SpeechRecord>& records, const std::filesystem::path& path) {
    std::string out;
    for (const auto& record : records) {
        nlohmann::json j;
        j["schema_version"] = kCorpusSchemaVersion;
        j["speech_id"] = record.speech_id;
        j["speaker_name"] = record.speaker_name;
        j["party"] = record.party;
        j["house"] = to_string(record.house);
        j["date"] = record.date;
        j["text"] = record.text;
        j["matched_queries"] = record.matched_queries;  // set: serialized sorted
        out += j.dump();
        out += '\n';
    }
    io::write_file_atomic(path, out);
}

std::vector<SpeechRecord> load_corpus(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw NotFoundError("corpus file not found: " + path.string());
    }
    std::vector<SpeechRecord> records;
    const auto lines = io::read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("record", where + ": " + e.what());
        }
        check_schema_version(j, kCorpusSchemaVersion, where);
        try {
            SpeechRecord record;
            record.speech_id = j.at("speech_id").get<std::string>();
            record.speaker_name = j.at("speaker_name").get<std::string>();
            record.party = j.at("party").get<std::string>();
            record.house = house_from_string(j.at("house").get<std::string>());
            record.date = j.at("date").get<std::string>();
            record.text = j.at("text").get<std::string>();
            record.matched_queries = j.at("matched_queries").get<std::set<std::string>>();
            if (record.speech_id.empty()) {
                throw ParseError("speech_id", where + ": empty speech_id");
            }
            if (!is_iso_date(record.date)) {
                throw ParseError("date", where + ": \"" + record.date + "\" is not YYYY-MM-DD");
            }
            records.push_back(std::move(record));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("record", where + ": " + e.what());
        }
    }
    return records;
}

SpeakerRoster load_roster(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw NotFoundError("roster file not found: " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("roster", path.string() + ": " + e.what());
    }
    check_schema_version(j, kRosterSchemaVersion, path.string());
    SpeakerRoster roster;
    try {
        for (const auto& item : j.at("entries")) {
            RosterEntry entry;
            entry.speaker_name = item.at("speaker_name").get<std::string>();
            entry.party = item.at("party").get<std::string>();
            entry.house = house_from_string(item.at("house").get<std::string>());
            entry.active = item.at("active").get<bool>();
            roster.entries.push_back(std::move(entry));
        }
        if (j.contains("aliases")) {
            roster.aliases = j.at("aliases").get<std::map<std::string, std::string>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("roster", path.string() + ": " + e.what());
    }
    validate_roster(roster);
    return roster;
}

void save_roster(const SpeakerRoster& roster, const std::filesystem::path& path) {
    validate_roster(roster);
    nlohmann::json j;
    j["schema_version"] = kRosterSchemaVersion;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& entry : roster.entries) {
        nlohmann::json e;
        e["speaker_name"] = entry.speaker_name;
        e["party"] = entry.party;
        e["house"] = to_string(entry.house);
        e["active"] = entry.active;
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    j["aliases"] = roster.aliases;
    io::write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace ideoaxis::corpus
