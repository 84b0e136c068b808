#include "ideoaxis/pipeline/manifest.hpp"

#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"

namespace ideoaxis::pipeline {

namespace {

using nlohmann::json;

std::string utc_now_iso() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

json entry_to_json(const ManifestEntry& entry) {
    return json{{"schema_version", 1},
                {"stage", entry.stage},
                {"unit", entry.unit},
                {"status", entry.status},
                {"inputs", entry.inputs},
                {"params_hash", entry.params_hash},
                {"outputs", entry.outputs},
                {"timestamp", entry.timestamp}};
}

ManifestEntry entry_from_json(const json& j, std::size_t line_no) {
    const std::string where = "manifest line " + std::to_string(line_no);
    if (!j.is_object() || !j.contains("schema_version")) {
        throw ParseError("manifest", where + ": expected object with schema_version");
    }
    if (j.at("schema_version").get<int>() != 1) {
        throw SchemaVersionError(where + ": unsupported manifest schema_version " +
                                 j.at("schema_version").dump());
    }
    ManifestEntry entry;
    try {
        entry.stage = j.at("stage").get<std::string>();
        entry.unit = j.at("unit").get<std::string>();
        entry.status = j.at("status").get<std::string>();
        entry.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
        entry.params_hash = j.at("params_hash").get<std::string>();
        entry.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
        entry.timestamp = j.at("timestamp").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError("manifest", where + ": " + e.what());
    }
    return entry;
}

}  // namespace

Manifest::Manifest(std::filesystem::path file) : file_(std::move(file)) {
    if (!std::filesystem::exists(file_)) return;
    std::size_t line_no = 0;
    for (const auto& line : io::read_lines(file_)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("manifest",
                             "manifest line " + std::to_string(line_no) + ": " + e.what());
        }
        entries_.push_back(entry_from_json(j, line_no));
    }
}

void Manifest::append(ManifestEntry entry) {
    entry.timestamp = utc_now_iso();
    std::filesystem::create_directories(file_.parent_path());
    std::ofstream out(file_, std::ios::app | std::ios::binary);
    if (!out) throw NotFoundError("cannot open manifest for append: " + file_.string());
    out << entry_to_json(entry).dump() << "\n";
    out.flush();
    if (!out) throw PreconditionError("manifest append failed: " + file_.string());
    entries_.push_back(std::move(entry));
}

const ManifestEntry* Manifest::latest(const std::string& stage, const std::string& unit) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->stage == stage && it->unit == unit) return &*it;
    }
    return nullptr;
}

std::optional<std::string> Manifest::latest_output_hash(const std::string& relative_path) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        const auto found = it->outputs.find(relative_path);
        if (found != it->outputs.end()) return found->second;
    }
    return std::nullopt;
}

}  // namespace ideoaxis::pipeline
