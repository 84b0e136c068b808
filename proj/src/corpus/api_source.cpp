#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <thread>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/corpus/source.hpp"

namespace ideoaxis::corpus {

using nlohmann::json;

namespace {

constexpr int kPageCeiling = 100;  // documented per-page maximum

std::string excerpt(const std::string& body) { return body.substr(0, 200); }

// Pulls a required field out of one speechRecord element, naming the field
// on failure so the caller can see exactly what the service changed.
std::string require_string(const json& record, const char* field) {
    if (!record.contains(field) || record[field].is_null()) {
        throw ParseError(field, std::string("speech record is missing \"") + field + "\"");
    }
    if (!record[field].is_string()) {
        throw ParseError(field, std::string("speech record field \"") + field +
                                    "\" is not a string");
    }
    return record[field].get<std::string>();
}

}  // namespace

ApiSpeechSource::ApiSpeechSource(std::string base_url, RateLimiter* limiter, RetryPolicy retry,
                                 int page_size)
    : base_url_(std::move(base_url)), limiter_(limiter), retry_(retry),
      page_size_(std::clamp(page_size, 1, kPageCeiling)) {}

std::vector<SpeechRecord> ApiSpeechSource::fetch(const std::string& query,
                                                 const std::string& date_from,
                                                 const std::string& date_to, House house) {
    if (query.empty()) throw PreconditionError("query is empty");
    if (!is_iso_date(date_from) || !is_iso_date(date_to) || date_from > date_to) {
        throw PreconditionError("invalid date range " + date_from + " .. " + date_to);
    }
    last_retry_count_ = 0;

    httplib::Client client(base_url_);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(60, 0);

    std::vector<SpeechRecord> out;
    int start_record = 1;
    while (true) {
        httplib::Params params = {
            {"any", query},
            {"from", date_from},
            {"until", date_to},
            {"nameOfHouse", house_api_name(house)},
            {"startRecord", std::to_string(start_record)},
            {"maximumRecords", std::to_string(page_size_)},
            {"recordPacking", "json"},
        };
        const std::string path =
            httplib::append_query_params("/api/speech", params);

        // Transient failures (unreachable, 429, 5xx) back off and retry;
        // anything else is a hard stop carrying the response.
        auto get_with_retry = [&]() -> httplib::Result {
            auto delay = retry_.initial_delay;
            for (int attempt = 0;; ++attempt) {
                if (limiter_ != nullptr) limiter_->acquire();
                auto res = client.Get(path);
                if (res && res->status == 200) return res;
                const bool transient = !res || res->status == 429 || res->status >= 500;
                if (!transient) {
                    throw ApiError("minutes API returned HTTP " + std::to_string(res->status) +
                                       " for " + path,
                                   res->status, excerpt(res->body), /*retryable=*/false,
                                   attempt);
                }
                if (attempt == retry_.max_retries) {
                    const int status = res ? res->status : 0;
                    const std::string body = res ? excerpt(res->body) : "";
                    throw ApiError("minutes API still failing after " + std::to_string(attempt) +
                                       " retries for " + path,
                                   status, body, /*retryable=*/true, attempt);
                }
                ++last_retry_count_;
                std::this_thread::sleep_for(delay);
                delay = std::chrono::milliseconds(static_cast<long long>(
                    static_cast<double>(delay.count()) * retry_.multiplier));
            }
        };
        auto res = get_with_retry();

        json page;
        try {
            page = json::parse(res->body);
        } catch (const json::exception& e) {
            throw ParseError("response", std::string("minutes API response is not valid JSON: ") +
                                             e.what());
        }
        if (!page.contains("numberOfRecords")) {
            throw ParseError("numberOfRecords",
                             "minutes API response lacks numberOfRecords: " + excerpt(res->body));
        }

        if (page.contains("speechRecord")) {
            if (!page["speechRecord"].is_array()) {
                throw ParseError("speechRecord", "speechRecord is not an array");
            }
            for (const auto& item : page["speechRecord"]) {
                SpeechRecord record;
                record.speech_id = require_string(item, "speechID");
                record.speaker_name = require_string(item, "speaker");
                // speakerGroup may legitimately be null (chairs, witnesses).
                if (item.contains("speakerGroup") && item["speakerGroup"].is_string()) {
                    record.party = item["speakerGroup"].get<std::string>();
                }
                record.house = house_from_api_name(require_string(item, "nameOfHouse"));
                record.date = require_string(item, "date");
                record.text = require_string(item, "speech");
                if (!is_iso_date(record.date)) {
                    throw ParseError("date", "speech " + record.speech_id +
                                                 " has non-ISO date \"" + record.date + "\"");
                }
                record.matched_queries = {query};
                if (record.text.empty()) continue;
                out.push_back(std::move(record));
            }
        }

        if (!page.contains("nextRecordPosition") || page["nextRecordPosition"].is_null()) break;
        const int next = page["nextRecordPosition"].get<int>();
        if (next <= start_record) break;  // defensive: never loop on a bad cursor
        start_record = next;
    }
    return out;
}

}  // namespace ideoaxis::corpus
