#include "ideoaxis/corpus/types.hpp"

#include <algorithm>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/utf8.hpp"

namespace ideoaxis::corpus {

std::string to_string(House house) {
    switch (house) {
        case House::LOWER: return "LOWER";
        case House::UPPER: return "UPPER";
    }
    throw PreconditionError("unknown House ordinal");
}

House house_from_string(const std::string& text) {
    if (text == "LOWER") return House::LOWER;
    if (text == "UPPER") return House::UPPER;
    throw ParseError("house", "unknown house \"" + text + "\"");
}

std::string house_api_name(House house) {
    return house == House::LOWER ? "衆議院" : "参議院";
}

House house_from_api_name(const std::string& name) {
    if (name == "衆議院") return House::LOWER;
    if (name == "参議院") return House::UPPER;
    throw ParseError("nameOfHouse", "unknown chamber name \"" + name + "\"");
}

bool is_party_code(const std::string& code) {
    return std::find(kPartyCodes.begin(), kPartyCodes.end(), code) != kPartyCodes.end();
}

bool is_iso_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    const int month = (text[5] - '0') * 10 + (text[6] - '0');
    const int day = (text[8] - '0') * 10 + (text[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

void TopicSpec::validate() const {
    if (topic_id.empty()) throw PreconditionError("topic_id is empty");
    if (query_words.empty()) {
        throw PreconditionError("topic \"" + topic_id + "\" has no query words");
    }
    for (const auto& word : query_words) {
        if (word.empty()) {
            throw PreconditionError("topic \"" + topic_id + "\" has an empty query word");
        }
    }
    if (!is_iso_date(date_from) || !is_iso_date(date_to)) {
        throw PreconditionError("topic \"" + topic_id +
                                "\" needs ISO dates (YYYY-MM-DD), got \"" + date_from +
                                "\" .. \"" + date_to + "\"");
    }
    if (date_from > date_to) {
        throw PreconditionError("topic \"" + topic_id + "\" has date_from after date_to");
    }
}

void validate_roster(const SpeakerRoster& roster) {
    if (roster.entries.empty()) throw PreconditionError("roster has no entries");
    std::set<std::string> names;
    for (const auto& entry : roster.entries) {
        if (entry.speaker_name.empty()) throw PreconditionError("roster entry with empty name");
        if (!names.insert(entry.speaker_name).second) {
            throw PreconditionError("duplicate roster entry \"" + entry.speaker_name + "\"");
        }
        if (!is_party_code(entry.party)) {
            throw PreconditionError("roster entry \"" + entry.speaker_name +
                                    "\" has unknown party code \"" + entry.party + "\"");
        }
    }
    for (const auto& [alias, canonical] : roster.aliases) {
        if (!names.count(canonical)) {
            throw PreconditionError("alias \"" + alias + "\" points at \"" + canonical +
                                    "\", which is not in the roster");
        }
    }
}

std::string normalize_speaker_name(const std::string& name) {
    return utf8::strip_all_spaces(name);
}

const RosterEntry* resolve_speaker(const SpeakerRoster& roster, const std::string& name) {
    std::string key = normalize_speaker_name(name);
    for (const auto& [alias, canonical] : roster.aliases) {
        if (normalize_speaker_name(alias) == key) {
            key = normalize_speaker_name(canonical);
            break;
        }
    }
    for (const auto& entry : roster.entries) {
        if (normalize_speaker_name(entry.speaker_name) == key) return &entry;
    }
    return nullptr;
}

}  // namespace ideoaxis::corpus
