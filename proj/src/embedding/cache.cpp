#include "ideoaxis/embedding/cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"

static_assert(std::endian::native == std::endian::little,
              "cache record layout assumes a little-endian host");

namespace ideoaxis::emb {

namespace fs = std::filesystem;

namespace {
constexpr const char* kIdxSchema = "ideoaxis-embcache 1";
}

EmbeddingCache::EmbeddingCache(fs::path dir, ProviderDescriptor descriptor)
    : dir_(std::move(dir)), descriptor_(std::move(descriptor)) {
    fs::create_directories(dir_);
    if (!fs::exists(idx_path())) return;

    auto lines = io::read_lines(idx_path());
    if (lines.empty()) return;
    {
        std::istringstream head(lines[0]);
        std::string magic, version, dim_field;
        head >> magic >> version >> dim_field;
        if (magic + " " + version != kIdxSchema)
            throw SchemaVersionError("embedding cache index has unknown schema: " + lines[0]);
        if (dim_field != "dim=" + std::to_string(descriptor_.dimension))
            throw DimensionError("embedding cache " + idx_path().string() +
                                 " was written with a different dimension (" + dim_field + ")");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::istringstream ls(lines[i]);
        std::string hash;
        std::uint64_t record = 0;
        if (!(ls >> hash >> record))
            throw ParseError("index line " + std::to_string(i), "expected '<hash> <record>'");
        index_.emplace(std::move(hash), record);
    }
    const auto expected = static_cast<std::uintmax_t>(index_.size()) * descriptor_.dimension * 4;
    if (!fs::exists(vec_path()) || fs::file_size(vec_path()) < expected)
        throw IntegrityError("embedding cache vector file shorter than its index: " +
                             vec_path().string());
}

fs::path EmbeddingCache::vec_path() const { return dir_ / (descriptor_.provider_id + ".vec"); }
fs::path EmbeddingCache::idx_path() const { return dir_ / (descriptor_.provider_id + ".idx"); }

std::size_t EmbeddingCache::size() const {
    std::shared_lock lock(mutex_);
    return index_.size();
}

std::optional<std::vector<double>> EmbeddingCache::lookup(const std::string& content_hash) const {
    std::uint64_t record = 0;
    {
        std::shared_lock lock(mutex_);
        auto it = index_.find(content_hash);
        if (it == index_.end()) return std::nullopt;
        record = it->second;
    }
    std::ifstream in(vec_path(), std::ios::binary);
    if (!in) throw NotFoundError("embedding cache vector file missing: " + vec_path().string());
    const std::size_t dim = descriptor_.dimension;
    in.seekg(static_cast<std::streamoff>(record * dim * 4));
    std::vector<float> raw(dim);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(dim * 4));
    if (static_cast<std::size_t>(in.gcount()) != dim * 4)
        throw IntegrityError("embedding cache record truncated: " + vec_path().string());
    std::vector<double> values(dim);
    for (std::size_t i = 0; i < dim; ++i) values[i] = static_cast<double>(raw[i]);
    return values;
}

void EmbeddingCache::insert(const std::string& content_hash, const std::vector<double>& values) {
    if (values.size() != descriptor_.dimension)
        throw DimensionError("cache insert: vector dimension " + std::to_string(values.size()) +
                             " != " + std::to_string(descriptor_.dimension));
    std::unique_lock lock(mutex_);
    if (index_.count(content_hash)) return;

    const bool fresh = !fs::exists(idx_path());
    std::ofstream vec(vec_path(), std::ios::binary | std::ios::app);
    std::ofstream idx(idx_path(), std::ios::app);
    if (!vec || !idx) throw Error("cannot open embedding cache files in " + dir_.string());
    if (fresh) idx << kIdxSchema << " dim=" << descriptor_.dimension << "\n";

    std::vector<float> raw(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) raw[i] = static_cast<float>(values[i]);
    const std::uint64_t record = index_.size();
    vec.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * 4));
    idx << content_hash << " " << record << "\n";
    if (!vec || !idx) throw Error("embedding cache write failed in " + dir_.string());
    index_.emplace(content_hash, record);
}

}  // namespace ideoaxis::emb
