#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <nlohmann/json.hpp>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/embedding/provider.hpp"

namespace ideoaxis::emb {

using nlohmann::json;

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string base_url, ProviderDescriptor descriptor,
                                             std::size_t max_batch)
    : base_url_(std::move(base_url)), descriptor_(std::move(descriptor)), max_batch_(max_batch) {}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(const std::vector<std::string>& texts) {
    httplib::Client client(base_url_);
    client.set_read_timeout(120, 0);

    json body;
    body["texts"] = texts;
    auto res = client.Post("/embed", body.dump(), "application/json");
    if (!res)
        throw ApiError("embedding endpoint unreachable: " + base_url_, 0, "", /*retryable=*/true);
    if (res->status != 200)
        throw ApiError("embedding endpoint returned HTTP " + std::to_string(res->status),
                       res->status, res->body.substr(0, 200), res->status >= 500);

    json parsed;
    try {
        parsed = json::parse(res->body);
    } catch (const json::exception& e) {
        throw ParseError("body", std::string("embedding response is not valid JSON: ") + e.what());
    }
    if (!parsed.contains("vectors") || !parsed["vectors"].is_array())
        throw ParseError("vectors", "missing or non-array in embedding response");
    const auto& vecs = parsed["vectors"];
    if (vecs.size() != texts.size())
        throw DimensionError("embedding provider returned " + std::to_string(vecs.size()) +
                             " vectors for " + std::to_string(texts.size()) + " texts");

    std::vector<EmbeddingVector> out;
    out.reserve(vecs.size());
    for (const auto& v : vecs) {
        std::vector<double> values = v.get<std::vector<double>>();
        if (values.size() != descriptor_.dimension)
            throw DimensionError("embedding provider emitted dimension " +
                                 std::to_string(values.size()) + ", declared " +
                                 std::to_string(descriptor_.dimension));
        out.push_back(EmbeddingVector{std::move(values), descriptor_.provider_id});
    }
    return out;
}

}  // namespace ideoaxis::emb
