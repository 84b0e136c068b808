#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ideoaxis/nlproc/types.hpp"
#include "ideoaxis/pipeline/config.hpp"
#include "ideoaxis/pipeline/manifest.hpp"

namespace ideoaxis::pipeline {

enum class Stage {
    INGEST,
    CLASSIFY,
    EMBED,
    PROFILE,
    AXIS,
    SCALE,
    TOPICS,
    PLOT,
    VALIDATE,
};

inline constexpr int kNumStages = 9;

std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);

struct RunContext {
    bool offline = false;
};

struct StageResult {
    Stage stage = Stage::INGEST;
    std::string unit;
    std::string status;  // "ok" | "cache-hit"
    std::map<std::string, std::string> outputs;
    int failed_checks = 0;  // VALIDATE only: configured sign checks that failed
};

// Runs one stage across every topic (plus topic-independent work), verifying
// upstream artifacts first. Missing upstream output -> StageOrderError
// naming the stage to run; an artifact whose bytes no longer match the
// manifest -> IntegrityError.
std::vector<StageResult> run_stage(Stage stage, const PipelineConfig& config,
                                   const RunContext& ctx = {});

struct RunSummary {
    std::vector<StageResult> results;

    int total_failed_checks() const;
};

// All stages from `from` onward, in dependency order; the first failing
// stage aborts with its error and earlier artifacts stay on disk.
RunSummary run_all(const PipelineConfig& config, const RunContext& ctx = {},
                   Stage from = Stage::INGEST);

// Classified-sentence artifact: one JSON object per line with schema_version,
// speech_id, index, text, label, confidence.
void store_sentence_units(const std::vector<nlp::SentenceUnit>& units,
                          const std::filesystem::path& path);
std::vector<nlp::SentenceUnit> load_sentence_units(const std::filesystem::path& path);

// Relative artifact names inside the output directory, shared by stages,
// tests, and the CLI.
std::string corpus_artifact(const std::string& topic_id);
std::string sentences_artifact(const std::string& topic_id);
std::string profiles_artifact(const std::string& topic_id);
std::string axis_artifact(const std::string& topic_id);
std::string results_artifact(const std::string& topic_id);
std::string parties_artifact(const std::string& topic_id);
std::string topics_artifact(const std::string& topic_id);
std::string topics_text_artifact(const std::string& topic_id);
std::string plot_artifact(const std::string& topic_id);
std::string plot_sidecar_artifact(const std::string& topic_id);
std::string validation_artifact(const std::string& topic_id);
inline constexpr const char* kClassifierArtifact = "classifier.json";
inline constexpr const char* kManifestName = "manifest.jsonl";

}  // namespace ideoaxis::pipeline
