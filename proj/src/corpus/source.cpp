#include "ideoaxis/corpus/source.hpp"

#include <algorithm>
#include <map>
#include <thread>
#include <tuple>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/corpus/store.hpp"

namespace ideoaxis::corpus {

RateLimiter::RateLimiter(std::chrono::milliseconds min_interval)
    : interval_(min_interval), next_slot_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        slot = std::max(now, next_slot_);
        next_slot_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
}

FileSpeechSource::FileSpeechSource(const std::filesystem::path& corpus_path)
    : records_(load_corpus(corpus_path)) {}

FileSpeechSource::FileSpeechSource(std::vector<SpeechRecord> records)
    : records_(std::move(records)) {}

std::vector<SpeechRecord> FileSpeechSource::fetch(const std::string& query,
                                                  const std::string& date_from,
                                                  const std::string& date_to, House house) {
    if (query.empty()) throw PreconditionError("query is empty");
    std::vector<SpeechRecord> out;
    for (const auto& record : records_) {
        if (record.house != house) continue;
        if (record.date < date_from || record.date > date_to) continue;
        if (record.text.find(query) == std::string::npos) continue;
        SpeechRecord hit = record;
        hit.matched_queries = {query};
        out.push_back(std::move(hit));
    }
    return out;
}

std::vector<SpeechRecord> build_topic_corpus(const TopicSpec& spec, const SpeakerRoster& roster,
                                             SpeechSource& source) {
    spec.validate();
    validate_roster(roster);

    // Fetch each chamber the active roster actually covers, in enum order.
    std::vector<House> houses;
    for (House house : {House::LOWER, House::UPPER}) {
        for (const auto& entry : roster.entries) {
            if (entry.active && entry.house == house) {
                houses.push_back(house);
                break;
            }
        }
    }
    if (houses.empty()) throw PreconditionError("roster has no active entries");

    std::map<std::string, SpeechRecord> by_id;
    for (const auto& query : spec.query_words) {
        for (House house : houses) {
            for (auto& record : source.fetch(query, spec.date_from, spec.date_to, house)) {
                auto it = by_id.find(record.speech_id);
                if (it != by_id.end()) {
                    it->second.matched_queries.insert(record.matched_queries.begin(),
                                                      record.matched_queries.end());
                    continue;
                }
                const RosterEntry* entry = resolve_speaker(roster, record.speaker_name);
                if (entry == nullptr || !entry->active || entry->house != record.house) continue;
                if (record.text.empty()) continue;
                record.speaker_name = entry->speaker_name;
                record.party = entry->party;
                by_id.emplace(record.speech_id, std::move(record));
            }
        }
    }

    std::vector<SpeechRecord> out;
    out.reserve(by_id.size());
    for (auto& [id, record] : by_id) out.push_back(std::move(record));
    std::sort(out.begin(), out.end(), [](const SpeechRecord& a, const SpeechRecord& b) {
        return std::tie(a.date, a.speech_id) < std::tie(b.date, b.speech_id);
    });
    return out;
}

}  // namespace ideoaxis::corpus
