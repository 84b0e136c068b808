#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ideoaxis::seedgen {

enum class Side { PRO, CON };

std::string to_string(Side side);
Side side_from_string(const std::string& text);  // accepts "PRO"/"CON" and "pro"/"con"

// One generation run: the prompt, the completions verbatim, and enough
// provenance (model, time, sampling note) to audit where an axis came
// from. Bundles are immutable once written; the stored content hash pins
// everything downstream.
struct SeedBundle {
    std::string topic_id;
    Side side = Side::PRO;
    std::string prompt;
    std::vector<std::string> texts;
    std::string model_id;
    std::string created_at;  // ISO-8601 UTC
    std::string sampling = "service-default";
};

// Throws PreconditionError when a bundle violates its invariants
// (empty topic/prompt/texts, or any empty text).
void validate_bundle(const SeedBundle& bundle);

// Canonical serialization hash; identical bundles hash identically.
std::string bundle_content_hash(const SeedBundle& bundle);

class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    virtual std::string model_id() const = 0;
};

// OpenAI-style chat-completions client. The bearer token comes from an
// environment variable so credentials never live in config files.
class HttpChatClient final : public ChatClient {
public:
    HttpChatClient(std::string base_url, std::string model,
                   std::string api_key_env = "IDEOAXIS_CHAT_API_KEY");

    std::string complete(const std::string& prompt) override;
    std::string model_id() const override { return model_; }

private:
    std::string base_url_;
    std::string model_;
    std::string api_key_env_;
};

// Canned client for tests and offline smoke runs: returns the configured
// responses in order (cycling past the end). Empty strings let tests
// exercise the empty-completion retry path.
class FixtureChatClient final : public ChatClient {
public:
    explicit FixtureChatClient(std::vector<std::string> responses,
                               std::string model = "fixture-model");

    std::string complete(const std::string& prompt) override;
    std::string model_id() const override { return model_; }
    int calls() const { return calls_; }

private:
    std::vector<std::string> responses_;
    std::string model_;
    int calls_ = 0;
};

struct GenerateReport {
    int empty_retries = 0;
};

// Requests n completions for the prompt. Empty completions are rejected
// and re-requested (counted in the report); persistent emptiness becomes a
// retryable ApiError.
SeedBundle generate_seeds(const std::string& topic_id, Side side, const std::string& prompt,
                          int n, ChatClient& client, GenerateReport* report = nullptr);

// Atomic write with the content hash embedded. Bundles are append-only:
// writing over an existing file is only a no-op when the content is
// identical, otherwise it fails.
void save_seeds(const SeedBundle& bundle, const std::filesystem::path& path);

// Verifies the stored content hash before returning; tampering surfaces as
// IntegrityError, absence as NotFoundError.
SeedBundle load_seeds(const std::filesystem::path& path);

}  // namespace ideoaxis::seedgen
