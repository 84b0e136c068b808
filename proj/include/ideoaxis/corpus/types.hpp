#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ideoaxis::corpus {

enum class House { LOWER, UPPER };

std::string to_string(House house);
House house_from_string(const std::string& text);

// Mapping to the minutes API's chamber names (衆議院 / 参議院).
std::string house_api_name(House house);
House house_from_api_name(const std::string& name);

// The six party codes every roster entry must use.
inline constexpr std::array<const char*, 6> kPartyCodes = {"LDP",  "NDP",     "CDP",
                                                           "JCP",  "Komeito", "JRP"};
bool is_party_code(const std::string& code);

// True for a well-formed ISO-8601 calendar date (YYYY-MM-DD).
bool is_iso_date(const std::string& text);

// One speech as stored in a corpus. `party` holds the canonical party code
// once a record has passed the roster filter; records straight off a source
// still carry the raw affiliation string the service returned.
struct SpeechRecord {
    std::string speech_id;
    std::string speaker_name;
    std::string party;
    House house = House::LOWER;
    std::string date;  // ISO-8601
    std::string text;
    std::set<std::string> matched_queries;

    bool operator==(const SpeechRecord&) const = default;
};

struct TopicSpec {
    std::string topic_id;
    std::vector<std::string> query_words;
    std::string date_from;
    std::string date_to;

    // Throws PreconditionError on empty id/queries or a bad date range.
    void validate() const;
};

struct RosterEntry {
    std::string speaker_name;
    std::string party;  // one of kPartyCodes
    House house = House::LOWER;
    bool active = true;
};

// Target legislators plus an alias table mapping name variants (honorifics,
// transcription differences) to canonical speaker names.
struct SpeakerRoster {
    std::vector<RosterEntry> entries;
    std::map<std::string, std::string> aliases;
};

// Throws on empty roster, duplicate names, unknown party codes, or aliases
// pointing at speakers absent from the roster.
void validate_roster(const SpeakerRoster& roster);

// Whitespace-normalized form used for all roster matching.
std::string normalize_speaker_name(const std::string& name);

// Resolves a speech's speaker string to a roster entry: normalize, follow
// the alias table, then exact match. Returns nullptr when unknown.
const RosterEntry* resolve_speaker(const SpeakerRoster& roster, const std::string& name);

}  // namespace ideoaxis::corpus
