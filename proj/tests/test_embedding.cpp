#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/embedding/cache.hpp"
#include "ideoaxis/embedding/ops.hpp"
#include "ideoaxis/embedding/provider.hpp"

using namespace ideoaxis;
namespace fs = std::filesystem;

namespace {

// Independent re-derivation of the mock provider's defining construction:
// FNV-1a over text bytes then seed bytes, mt19937_64, Box-Muller pairs from
// 53-bit uniforms, L2 normalization. Kept free of library calls.
std::vector<double> mock_oracle(const std::string& text, std::uint64_t seed, std::size_t dim) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    for (int k = 0; k < 8; ++k) {
        h ^= (seed >> (k * 8)) & 0xFFu;
        h *= 1099511628211ull;
    }
    std::mt19937_64 rng(h);
    std::vector<double> v(dim);
    std::size_t i = 0;
    while (i < dim) {
        double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
        double u2 = static_cast<double>(rng() >> 11) * 0x1p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        v[i++] = r * std::cos(2.0 * std::numbers::pi * u2);
        if (i < dim) v[i++] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    return v;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() /
                     ("ideoaxis_emb_" + std::to_string(std::random_device{}()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Provider that always throws; used to prove cache hits never touch it.
struct FailingProvider : emb::EmbeddingProvider {
    emb::ProviderDescriptor d;
    explicit FailingProvider(const emb::ProviderDescriptor& base) : d(base) {}
    const emb::ProviderDescriptor& descriptor() const override { return d; }
    std::vector<emb::EmbeddingVector> embed(const std::vector<std::string>&) override {
        throw Error("provider disabled");
    }
};

// Provider that lies about its dimension.
struct WrongDimProvider : emb::EmbeddingProvider {
    emb::ProviderDescriptor d{"wrongdim", 8, emb::Pooling::NATIVE};
    const emb::ProviderDescriptor& descriptor() const override { return d; }
    std::vector<emb::EmbeddingVector> embed(const std::vector<std::string>& texts) override {
        std::vector<emb::EmbeddingVector> out;
        for (std::size_t i = 0; i < texts.size(); ++i)
            out.push_back(emb::EmbeddingVector{std::vector<double>(4, 1.0), d.provider_id});
        return out;
    }
};

}  // namespace

TEST_CASE("mock provider matches the independent oracle") {
    emb::MockProvider provider(/*seed=*/7, /*dimension=*/768);
    auto got = provider.embed({"abc"});
    REQUIRE(got.size() == 1);
    auto expected = mock_oracle("abc", 7, 768);
    REQUIRE(got[0].values.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(got[0].values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("mock provider emits unit vectors") {
    emb::MockProvider provider(3, 768);
    for (const char* t : {"a", "原発", "こんにちは世界", "x y z", "1234567890"}) {
        auto v = provider.embed({t})[0];
        double n = 0;
        for (double x : v.values) n += x * x;
        CHECK(std::abs(std::sqrt(n) - 1.0) < 1e-9);
    }
}

TEST_CASE("same text twice in one batch gives equal vectors") {
    emb::MockProvider provider(1, 32);
    emb::EmbeddingService service(&provider, nullptr);
    auto vs = service.embed_batch({"dup", "dup"});
    REQUIRE(vs.size() == 2);
    CHECK(vs[0].values == vs[1].values);
}

TEST_CASE("cache serves bit-identical vectors with the provider disabled") {
    TempDir tmp;
    emb::MockProvider provider(11, 16);
    emb::EmbeddingCache cache(tmp.path, provider.descriptor());

    std::vector<std::string> texts{"alpha", "beta", "gamma"};
    std::vector<emb::EmbeddingVector> first;
    {
        emb::EmbeddingService service(&provider, &cache);
        first = service.embed_batch(texts);
    }
    {
        FailingProvider dead(provider.descriptor());
        emb::EmbeddingService service(&dead, &cache);
        auto second = service.embed_batch(texts);
        REQUIRE(second.size() == first.size());
        for (std::size_t i = 0; i < first.size(); ++i)
            CHECK(second[i].values == first[i].values);  // bitwise
    }
    // Cache persists across a reopen.
    {
        emb::EmbeddingCache reopened(tmp.path, provider.descriptor());
        CHECK(reopened.size() == 3);
        emb::EmbeddingService service(nullptr, &reopened);
        auto third = service.embed_batch(texts);
        for (std::size_t i = 0; i < first.size(); ++i)
            CHECK(third[i].values == first[i].values);
    }
}

TEST_CASE("with-cache and without-cache runs produce identical vectors") {
    TempDir tmp;
    emb::MockProvider provider(5, 24);
    emb::EmbeddingCache cache(tmp.path, provider.descriptor());
    emb::EmbeddingService cached(&provider, &cache);
    emb::EmbeddingService uncached(&provider, nullptr);
    std::vector<std::string> texts{"t1", "t2", "t3", "t1"};
    auto a = cached.embed_batch(texts);
    auto b = uncached.embed_batch(texts);
    for (std::size_t i = 0; i < texts.size(); ++i) CHECK(a[i].values == b[i].values);
}

TEST_CASE("cache miss without provider names the failing text index") {
    TempDir tmp;
    emb::MockProvider provider(2, 8);
    emb::EmbeddingCache cache(tmp.path, provider.descriptor());
    {
        emb::EmbeddingService service(&provider, &cache);
        service.embed_batch({"known"});
    }
    emb::EmbeddingService offline(nullptr, &cache);
    CHECK_NOTHROW(offline.embed_batch({"known"}));
    try {
        offline.embed_batch({"known", "unknown"});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
}

TEST_CASE("provider dimension mismatch is a contract violation") {
    WrongDimProvider provider;
    emb::EmbeddingService service(&provider, nullptr);
    CHECK_THROWS_AS(service.embed_batch({"x"}), DimensionError);
}

TEST_CASE("empty text is rejected with its index") {
    emb::MockProvider provider(0, 8);
    emb::EmbeddingService service(&provider, nullptr);
    CHECK_THROWS_AS(service.embed_batch({"ok", ""}), PreconditionError);
}

TEST_CASE("mean_vector basics") {
    auto v = [](std::vector<double> x) {
        return emb::EmbeddingVector{std::move(x), "p"};
    };
    SUBCASE("two unit axes average to the midpoint") {
        auto m = emb::mean_vector({v({1, 0}), v({0, 1})});
        CHECK(m.values == std::vector<double>{0.5, 0.5});
    }
    SUBCASE("single vector is returned unchanged") {
        auto m = emb::mean_vector({v({0.25, -3.5})});
        CHECK(m.values == std::vector<double>{0.25, -3.5});
    }
    SUBCASE("a thousand copies average back to the original") {
        // Exact-rational oracle: every copy is identical, so the true mean
        // is the vector itself; only accumulation error can move it.
        std::vector<emb::EmbeddingVector> many(1000, v({0.03125, -0.4375, 1.0 / 3.0}));
        auto m = emb::mean_vector(many);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(std::abs(m.values[i] - many[0].values[i]) < 1e-12);
    }
    SUBCASE("empty input is an error") {
        CHECK_THROWS_AS(emb::mean_vector({}), PreconditionError);
    }
    SUBCASE("mixed providers are an error") {
        auto other = emb::EmbeddingVector{{1.0, 2.0}, "q"};
        CHECK_THROWS_AS(emb::mean_vector({v({1, 2}), other}), DimensionError);
    }
}

TEST_CASE("ngram provider is deterministic and shape-correct") {
    emb::NgramProvider provider(64);
    auto a = provider.embed({"原発の再稼働に賛成です。"});
    auto b = provider.embed({"原発の再稼働に賛成です。"});
    CHECK(a[0].values == b[0].values);
    CHECK(a[0].values.size() == 64);
    // Similar texts should be closer than unrelated ones.
    auto c = provider.embed({"原発の再稼働に反対です。", "今日の天気は晴れです。"});
    auto cos = [](const std::vector<double>& x, const std::vector<double>& y) {
        double d = 0;
        for (std::size_t i = 0; i < x.size(); ++i) d += x[i] * y[i];
        return d;
    };
    CHECK(cos(a[0].values, c[0].values) > cos(a[0].values, c[1].values));
}

TEST_CASE("cache rejects a dimension-mismatched reopen") {
    TempDir tmp;
    emb::MockProvider p16(0, 16);
    emb::EmbeddingCache cache(tmp.path, p16.descriptor());
    emb::EmbeddingService service(&p16, &cache);
    service.embed_batch({"x"});
    auto d = p16.descriptor();
    d.dimension = 32;  // same id, different shape
    CHECK_THROWS_AS(emb::EmbeddingCache(tmp.path, d), DimensionError);
}
