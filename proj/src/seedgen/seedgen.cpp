#include "ideoaxis/seedgen/seedgen.hpp"

#include <ctime>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/hashing.hpp"
#include "ideoaxis/common/io.hpp"
#include "nlohmann/json.hpp"

namespace ideoaxis::seedgen {

namespace {

constexpr int kBundleSchemaVersion = 1;

// One completion may come back empty this many times before the run is
// abandoned as a service fault.
constexpr int kMaxEmptyRetriesPerText = 5;

std::string utc_now_iso() {
    const std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

// The hash covers every field except the hash itself, via the canonical
// (sorted-key, compact) serialization.
nlohmann::json canonical_payload(const SeedBundle& bundle) {
    nlohmann::json j;
    j["schema_version"] = kBundleSchemaVersion;
    j["topic_id"] = bundle.topic_id;
    j["side"] = to_string(bundle.side);
    j["prompt"] = bundle.prompt;
    j["texts"] = bundle.texts;
    j["model_id"] = bundle.model_id;
    j["created_at"] = bundle.created_at;
    j["sampling"] = bundle.sampling;
    return j;
}

}  // namespace

std::string to_string(Side side) { return side == Side::PRO ? "PRO" : "CON"; }

Side side_from_string(const std::string& text) {
    if (text == "PRO" || text == "pro") return Side::PRO;
    if (text == "CON" || text == "con") return Side::CON;
    throw ParseError("side", "unknown side \"" + text + "\" (want pro or con)");
}

void validate_bundle(const SeedBundle& bundle) {
    if (bundle.topic_id.empty()) throw PreconditionError("seed bundle has empty topic_id");
    if (bundle.prompt.empty()) throw PreconditionError("seed bundle has empty prompt");
    if (bundle.texts.empty()) throw PreconditionError("seed bundle has no texts");
    for (const auto& text : bundle.texts) {
        if (text.empty()) throw PreconditionError("seed bundle contains an empty text");
    }
}

std::string bundle_content_hash(const SeedBundle& bundle) {
    return hashing::sha256_hex(canonical_payload(bundle).dump());
}

FixtureChatClient::FixtureChatClient(std::vector<std::string> responses, std::string model)
    : responses_(std::move(responses)), model_(std::move(model)) {
    if (responses_.empty()) throw PreconditionError("fixture chat client needs responses");
}

std::string FixtureChatClient::complete(const std::string&) {
    const auto& response = responses_[static_cast<std::size_t>(calls_) % responses_.size()];
    ++calls_;
    return response;
}

SeedBundle generate_seeds(const std::string& topic_id, Side side, const std::string& prompt,
                          int n, ChatClient& client, GenerateReport* report) {
    if (n < 1) throw PreconditionError("need n >= 1 seed texts");
    if (topic_id.empty()) throw PreconditionError("topic_id is empty");
    if (prompt.empty()) throw PreconditionError("prompt is empty");

    GenerateReport local;
    SeedBundle bundle;
    bundle.topic_id = topic_id;
    bundle.side = side;
    bundle.prompt = prompt;
    bundle.model_id = client.model_id();
    bundle.created_at = utc_now_iso();

    while (static_cast<int>(bundle.texts.size()) < n) {
        std::string text;
        int empties = 0;
        while (true) {
            text = client.complete(prompt);
            if (!text.empty()) break;
            ++local.empty_retries;
            if (++empties > kMaxEmptyRetriesPerText) {
                throw ApiError("chat service keeps returning empty completions", 0, "",
                               /*retryable=*/true, empties - 1);
            }
        }
        bundle.texts.push_back(std::move(text));
    }
    if (report != nullptr) *report = local;
    validate_bundle(bundle);
    return bundle;
}

void save_seeds(const SeedBundle& bundle, const std::filesystem::path& path) {
    validate_bundle(bundle);
    nlohmann::json j = canonical_payload(bundle);
    j["content_hash"] = bundle_content_hash(bundle);
    const std::string serialized = j.dump(2) + "\n";

    if (std::filesystem::exists(path)) {
        if (io::read_file(path) == serialized) return;  // idempotent rewrite
        throw PreconditionError("seed bundle " + path.string() +
                                " already exists with different content; bundles are "
                                "append-only, write a new file instead");
    }
    io::write_file_atomic(path, serialized);
}

SeedBundle load_seeds(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw NotFoundError("seed bundle not found: " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bundle", path.string() + ": " + e.what());
    }
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kBundleSchemaVersion) {
            throw SchemaVersionError(path.string() + ": schema_version " +
                                     std::to_string(version) + " unsupported");
        }
        SeedBundle bundle;
        bundle.topic_id = j.at("topic_id").get<std::string>();
        bundle.side = side_from_string(j.at("side").get<std::string>());
        bundle.prompt = j.at("prompt").get<std::string>();
        bundle.texts = j.at("texts").get<std::vector<std::string>>();
        bundle.model_id = j.at("model_id").get<std::string>();
        bundle.created_at = j.at("created_at").get<std::string>();
        bundle.sampling = j.at("sampling").get<std::string>();

        const std::string recorded = j.at("content_hash").get<std::string>();
        const std::string actual = bundle_content_hash(bundle);
        if (recorded != actual) {
            throw IntegrityError("seed bundle " + path.string() +
                                 " failed hash verification (recorded " + recorded +
                                 ", computed " + actual + ")");
        }
        validate_bundle(bundle);
        return bundle;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bundle", path.string() + ": " + e.what());
    }
}

}  // namespace ideoaxis::seedgen
