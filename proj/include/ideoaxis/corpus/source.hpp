#pragma once

#include <chrono>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "ideoaxis/corpus/types.hpp"

namespace ideoaxis::corpus {

// Serializes outbound requests: every acquire() reserves the next free
// slot, at least min_interval after the previous one, and blocks until it
// arrives. Shared across queries so concurrent fetches stay polite.
class RateLimiter {
public:
    explicit RateLimiter(std::chrono::milliseconds min_interval = std::chrono::milliseconds(1000));
    void acquire();

private:
    std::mutex mutex_;
    std::chrono::milliseconds interval_;
    std::chrono::steady_clock::time_point next_slot_;
};

struct RetryPolicy {
    int max_retries = 5;
    std::chrono::milliseconds initial_delay{500};
    double multiplier = 2.0;
};

class SpeechSource {
public:
    virtual ~SpeechSource() = default;

    // Every record whose text matches `query` within [date_from, date_to]
    // for the given chamber, with matched_queries = {query}. Pagination is
    // the source's problem, not the caller's.
    virtual std::vector<SpeechRecord> fetch(const std::string& query,
                                            const std::string& date_from,
                                            const std::string& date_to, House house) = 0;
};

// Client for the National Diet minutes search service's speech endpoint
// (or any stand-in reachable at base_url for replayed fixtures). Respects
// the documented 100-records-per-page ceiling, paginates via
// nextRecordPosition, and retries transient failures (connect errors,
// HTTP 429/5xx) with exponential backoff.
class ApiSpeechSource final : public SpeechSource {
public:
    ApiSpeechSource(std::string base_url, RateLimiter* limiter, RetryPolicy retry = {},
                    int page_size = 100);

    std::vector<SpeechRecord> fetch(const std::string& query, const std::string& date_from,
                                    const std::string& date_to, House house) override;

    // Retries performed by the most recent fetch (0 when every request
    // succeeded first try).
    int last_retry_count() const { return last_retry_count_; }

private:
    std::string base_url_;
    RateLimiter* limiter_;
    RetryPolicy retry_;
    int page_size_;
    int last_retry_count_ = 0;
};

// Offline source over a stored corpus file (or an in-memory record list):
// substring match on text, inclusive date range, exact chamber.
class FileSpeechSource final : public SpeechSource {
public:
    explicit FileSpeechSource(const std::filesystem::path& corpus_path);
    explicit FileSpeechSource(std::vector<SpeechRecord> records);

    std::vector<SpeechRecord> fetch(const std::string& query, const std::string& date_from,
                                    const std::string& date_to, House house) override;

private:
    std::vector<SpeechRecord> records_;
};

// Full topic ingestion: fetches every query word over every chamber the
// active roster covers, deduplicates by speech_id (merging matched_queries),
// keeps only speeches by active roster members, canonicalizes speaker_name
// and party from the roster, and sorts by (date, speech_id).
std::vector<SpeechRecord> build_topic_corpus(const TopicSpec& spec, const SpeakerRoster& roster,
                                             SpeechSource& source);

}  // namespace ideoaxis::corpus
