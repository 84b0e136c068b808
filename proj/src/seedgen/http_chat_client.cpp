#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <nlohmann/json.hpp>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/seedgen/seedgen.hpp"

namespace ideoaxis::seedgen {

using nlohmann::json;

HttpChatClient::HttpChatClient(std::string base_url, std::string model, std::string api_key_env)
    : base_url_(std::move(base_url)), model_(std::move(model)),
      api_key_env_(std::move(api_key_env)) {}

std::string HttpChatClient::complete(const std::string& prompt) {
    const char* key = std::getenv(api_key_env_.c_str());
    if (key == nullptr || *key == '\0') {
        throw ConfigError("chat API key environment variable " + api_key_env_ + " is not set");
    }

    httplib::Client client(base_url_);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(180, 0);

    json body;
    body["model"] = model_;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});

    httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
    auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
        throw ApiError("chat service unreachable: " + base_url_, 0, "", /*retryable=*/true);
    }
    if (res->status != 200) {
        const bool transient = res->status == 429 || res->status >= 500;
        throw ApiError("chat service returned HTTP " + std::to_string(res->status), res->status,
                       res->body.substr(0, 200), transient);
    }

    json parsed;
    try {
        parsed = json::parse(res->body);
    } catch (const json::exception& e) {
        throw ParseError("body", std::string("chat response is not valid JSON: ") + e.what());
    }
    try {
        const auto& choices = parsed.at("choices");
        if (!choices.is_array() || choices.empty()) {
            throw ParseError("choices", "chat response has no choices");
        }
        return choices[0].at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError("choices", std::string("chat response shape unexpected: ") + e.what());
    }
}

}  // namespace ideoaxis::seedgen
