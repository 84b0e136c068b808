#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/hashing.hpp"
#include "ideoaxis/common/io.hpp"
#include "ideoaxis/corpus/source.hpp"
#include "ideoaxis/corpus/store.hpp"
#include "ideoaxis/embedding/cache.hpp"
#include "ideoaxis/embedding/ops.hpp"
#include "ideoaxis/embedding/provider.hpp"
#include "ideoaxis/evalcmp/evalcmp.hpp"
#include "ideoaxis/nlproc/classifier.hpp"
#include "ideoaxis/nlproc/segmenter.hpp"
#include "ideoaxis/pipeline/pipeline.hpp"
#include "ideoaxis/reduce/plot.hpp"
#include "ideoaxis/reduce/reduce.hpp"
#include "ideoaxis/scaling/scaling.hpp"
#include "ideoaxis/seedgen/seedgen.hpp"
#include "ideoaxis/topics/topics.hpp"

namespace ideoaxis::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Stage s) {
    switch (s) {
        case Stage::INGEST: return "INGEST";
        case Stage::CLASSIFY: return "CLASSIFY";
        case Stage::EMBED: return "EMBED";
        case Stage::PROFILE: return "PROFILE";
        case Stage::AXIS: return "AXIS";
        case Stage::SCALE: return "SCALE";
        case Stage::TOPICS: return "TOPICS";
        case Stage::PLOT: return "PLOT";
        case Stage::VALIDATE: return "VALIDATE";
    }
    throw PreconditionError("unreachable stage value");
}

Stage stage_from_string(const std::string& s) {
    std::string upper(s);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    for (int i = 0; i < kNumStages; ++i) {
        const Stage stage = static_cast<Stage>(i);
        if (to_string(stage) == upper) return stage;
    }
    throw ConfigError("unknown stage \"" + s +
                      "\" (expected one of INGEST, CLASSIFY, EMBED, PROFILE, AXIS, SCALE, "
                      "TOPICS, PLOT, VALIDATE)");
}

std::string corpus_artifact(const std::string& topic_id) { return "corpus_" + topic_id + ".jsonl"; }
std::string sentences_artifact(const std::string& topic_id) {
    return "sentences_" + topic_id + ".jsonl";
}
std::string profiles_artifact(const std::string& topic_id) {
    return "profiles_" + topic_id + ".json";
}
std::string axis_artifact(const std::string& topic_id) { return "axis_" + topic_id + ".json"; }
std::string results_artifact(const std::string& topic_id) { return "results_" + topic_id + ".tsv"; }
std::string parties_artifact(const std::string& topic_id) { return "parties_" + topic_id + ".tsv"; }
std::string topics_artifact(const std::string& topic_id) { return "topics_" + topic_id + ".tsv"; }
std::string topics_text_artifact(const std::string& topic_id) {
    return "topics_" + topic_id + ".txt";
}
std::string plot_artifact(const std::string& topic_id) { return "plot_" + topic_id + ".svg"; }
std::string plot_sidecar_artifact(const std::string& topic_id) {
    return "plot_" + topic_id + ".tsv";
}
std::string validation_artifact(const std::string& topic_id) {
    return "validation_" + topic_id + ".json";
}

void store_sentence_units(const std::vector<nlp::SentenceUnit>& units, const fs::path& path) {
    std::string out;
    for (const auto& u : units) {
        const json j{{"schema_version", 1},       {"speech_id", u.speech_id},
                     {"index", u.index},          {"text", u.text},
                     {"label", nlp::to_string(u.label)}, {"confidence", u.confidence}};
        out += j.dump();
        out += '\n';
    }
    io::write_file_atomic(path, out);
}

std::vector<nlp::SentenceUnit> load_sentence_units(const fs::path& path) {
    if (!fs::exists(path)) throw NotFoundError("sentence artifact missing: " + path.string());
    std::vector<nlp::SentenceUnit> units;
    const auto lines = io::read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::string where = "sentence line " + std::to_string(i + 1);
        json j;
        try {
            j = json::parse(lines[i]);
        } catch (const json::exception& e) {
            throw ParseError(where, e.what());
        }
        try {
            if (!j.is_object() || j.at("schema_version").get<int>() != 1) {
                throw SchemaVersionError("unsupported sentence artifact schema in " +
                                         path.string());
            }
            nlp::SentenceUnit u;
            u.speech_id = j.at("speech_id").get<std::string>();
            u.index = j.at("index").get<int>();
            u.text = j.at("text").get<std::string>();
            u.label = nlp::label_from_string(j.at("label").get<std::string>());
            u.confidence = j.at("confidence").get<double>();
            units.push_back(std::move(u));
        } catch (const json::exception& e) {
            throw ParseError(where, e.what());
        }
    }
    return units;
}

int RunSummary::total_failed_checks() const {
    int n = 0;
    for (const auto& r : results) n += r.failed_checks;
    return n;
}

namespace {

constexpr const char* kTrainCacheRel = "embed-train";

std::string topic_cache_rel(const std::string& topic_id) { return "embed/" + topic_id; }

struct StageCtx {
    const PipelineConfig& config;
    const RunContext& run;
    fs::path out;
    Manifest& manifest;
};

// Hash of a file the config points at; missing files are a config problem.
std::string external_input(const fs::path& path, const std::string& what) {
    if (!fs::exists(path)) throw ConfigError(what + " not found: " + path.string());
    return hashing::sha256_file_hex(path.string());
}

// Hash of an upstream artifact in the output directory. Never produced ->
// the caller skipped a stage; bytes differing from the manifest -> someone
// edited the artifact and downstream results would silently lie.
std::string artifact_input(const Manifest& manifest, const fs::path& out_dir,
                           const std::string& rel, Stage producer) {
    const fs::path path = out_dir / rel;
    const auto recorded = manifest.latest_output_hash(rel);
    if (!recorded || !fs::exists(path)) {
        throw StageOrderError("missing upstream artifact " + rel + "; run " +
                                  to_string(producer) + " first",
                              to_string(producer));
    }
    const std::string current = hashing::sha256_file_hex(path.string());
    if (current != *recorded) {
        throw IntegrityError("artifact " + rel +
                             " does not match the manifest (edited or corrupted); rerun " +
                             to_string(producer));
    }
    return current;
}

emb::ProviderDescriptor descriptor_for(const PipelineConfig& config) {
    switch (config.provider.kind) {
        case ProviderKind::MOCK:
            return emb::MockProvider(config.provider.seed, config.provider.dimension).descriptor();
        case ProviderKind::NGRAM:
            return emb::NgramProvider(config.provider.dimension).descriptor();
        case ProviderKind::HTTP:
            return emb::ProviderDescriptor{config.provider.provider_id,
                                           config.provider.dimension, emb::Pooling::NATIVE};
    }
    throw PreconditionError("unreachable provider kind");
}

std::unique_ptr<emb::EmbeddingProvider> make_provider(const PipelineConfig& config, bool offline) {
    switch (config.provider.kind) {
        case ProviderKind::MOCK:
            return std::make_unique<emb::MockProvider>(config.provider.seed,
                                                       config.provider.dimension);
        case ProviderKind::NGRAM:
            return std::make_unique<emb::NgramProvider>(config.provider.dimension);
        case ProviderKind::HTTP:
            if (offline) return nullptr;  // cache-only service
            return std::make_unique<emb::HttpEmbeddingProvider>(config.provider.base_url,
                                                                descriptor_for(config));
    }
    throw PreconditionError("unreachable provider kind");
}

struct ServiceBundle {
    std::unique_ptr<emb::EmbeddingProvider> provider;
    std::unique_ptr<emb::EmbeddingCache> cache;
    std::unique_ptr<emb::EmbeddingService> service;
};

ServiceBundle make_service(const PipelineConfig& config, const RunContext& run,
                           const fs::path& cache_dir) {
    ServiceBundle bundle;
    bundle.provider = make_provider(config, run.offline);
    bundle.cache = std::make_unique<emb::EmbeddingCache>(cache_dir, descriptor_for(config));
    bundle.service =
        std::make_unique<emb::EmbeddingService>(bundle.provider.get(), bundle.cache.get());
    return bundle;
}

json topic_params(const corpus::TopicSpec& spec) {
    return json{{"topic_id", spec.topic_id},
                {"query_words", spec.query_words},
                {"date_from", spec.date_from},
                {"date_to", spec.date_to}};
}

json provider_params(const PipelineConfig& config) {
    return json{{"provider_id", descriptor_for(config).provider_id},
                {"dimension", config.provider.dimension}};
}

json reducer_params(const ReducerConfig& reducer) {
    json j{{"method", reduce::to_string(reducer.method)}, {"seed", reducer.seed}};
    if (reducer.method == reduce::Method::UMAP) {
        const auto& u = reducer.umap;
        j["umap"] = json{{"n_neighbors", u.n_neighbors},
                         {"min_dist", u.min_dist},
                         {"a", u.a},
                         {"b", u.b},
                         {"n_epochs", u.n_epochs},
                         {"learning_rate", u.learning_rate},
                         {"negative_samples", u.negative_samples}};
    }
    return j;
}

// Runs one manifest work unit: skip with a "cache-hit" entry when the latest
// entry for (stage, unit) has the same inputs and params and every recorded
// output is still on disk with matching bytes; otherwise do the work and
// record fresh output hashes.
StageResult run_unit(StageCtx& ctx, Stage stage, const std::string& unit,
                     std::map<std::string, std::string> inputs, const json& params,
                     const std::vector<std::string>& output_names,
                     const std::function<void()>& work) {
    const std::string params_hash = hashing::sha256_hex(params.dump());
    const ManifestEntry* last = ctx.manifest.latest(to_string(stage), unit);

    bool up_to_date = last != nullptr && last->inputs == inputs &&
                      last->params_hash == params_hash &&
                      last->outputs.size() == output_names.size();
    if (up_to_date) {
        for (const auto& rel : output_names) {
            const auto it = last->outputs.find(rel);
            const fs::path path = ctx.out / rel;
            if (it == last->outputs.end() || !fs::exists(path) ||
                hashing::sha256_file_hex(path.string()) != it->second) {
                up_to_date = false;
                break;
            }
        }
    }

    ManifestEntry entry;
    entry.stage = to_string(stage);
    entry.unit = unit;
    entry.inputs = std::move(inputs);
    entry.params_hash = params_hash;
    if (up_to_date) {
        entry.status = "cache-hit";
        entry.outputs = last->outputs;
    } else {
        work();
        entry.status = "ok";
        for (const auto& rel : output_names) {
            const fs::path path = ctx.out / rel;
            if (!fs::exists(path)) {
                throw PreconditionError(to_string(stage) + " did not produce expected output " +
                                        rel);
            }
            entry.outputs[rel] = hashing::sha256_file_hex(path.string());
        }
    }
    ctx.manifest.append(entry);
    return StageResult{stage, unit, entry.status, entry.outputs, 0};
}

seedgen::SeedBundle load_bundle_checked(const PipelineConfig& config, const TopicConfig& topic,
                                        seedgen::Side side) {
    const std::string& rel =
        side == seedgen::Side::PRO ? topic.axis.pro_bundle : topic.axis.con_bundle;
    const auto bundle = seedgen::load_seeds(config.resolve(rel));
    if (bundle.topic_id != topic.spec.topic_id) {
        throw ConfigError("seed bundle " + rel + " is for topic \"" + bundle.topic_id +
                          "\", expected \"" + topic.spec.topic_id + "\"");
    }
    if (bundle.side != side) {
        throw ConfigError("seed bundle " + rel + " holds the " + seedgen::to_string(bundle.side) +
                          " side, expected " + seedgen::to_string(side));
    }
    return bundle;
}

topics::Tokenizer make_tokenizer(const PipelineConfig& config) {
    std::vector<std::string> dictionary;
    std::vector<std::string> stopwords;
    if (!config.token_dict_path.empty()) {
        dictionary = topics::load_term_list(config.resolve(config.token_dict_path).string());
    }
    if (!config.stopwords_path.empty()) {
        stopwords = topics::load_term_list(config.resolve(config.stopwords_path).string());
    }
    return topics::Tokenizer(std::move(dictionary), std::move(stopwords));
}

StageResult stage_ingest(StageCtx& ctx, const TopicConfig& topic) {
    const auto& config = ctx.config;
    const fs::path roster_path = config.resolve(config.roster_path);
    std::map<std::string, std::string> inputs{{"roster", external_input(roster_path, "roster")}};
    json params{{"topic", topic_params(topic.spec)}};
    const bool from_file = !config.corpus_path.empty();
    if (from_file) {
        inputs["corpus"] =
            external_input(config.resolve(config.corpus_path), "corpus source file");
        params["source"] = "file";
    } else {
        if (ctx.run.offline) {
            throw ConfigError("offline ingest for topic \"" + topic.spec.topic_id +
                              "\" needs corpus_path to point at a stored corpus");
        }
        params["source"] = "api";
        params["api_base_url"] = config.api_base_url;
    }
    const std::string out_name = corpus_artifact(topic.spec.topic_id);
    return run_unit(ctx, Stage::INGEST, topic.spec.topic_id, std::move(inputs), params,
                    {out_name}, [&] {
                        const auto roster = corpus::load_roster(roster_path);
                        corpus::RateLimiter limiter;
                        std::unique_ptr<corpus::SpeechSource> source;
                        if (from_file) {
                            source = std::make_unique<corpus::FileSpeechSource>(
                                config.resolve(config.corpus_path));
                        } else {
                            source = std::make_unique<corpus::ApiSpeechSource>(
                                config.api_base_url, &limiter);
                        }
                        const auto records =
                            corpus::build_topic_corpus(topic.spec, roster, *source);
                        corpus::store_corpus(records, ctx.out / out_name);
                    });
}

std::vector<StageResult> stage_classify(StageCtx& ctx) {
    const auto& config = ctx.config;
    const auto descriptor = descriptor_for(config);
    std::vector<StageResult> results;

    fs::path weights_file;
    if (!config.classifier.train_from.empty()) {
        const fs::path labeled_path = config.resolve(config.classifier.train_from);
        std::map<std::string, std::string> inputs{
            {"labeled", external_input(labeled_path, "labeled sentence data")}};
        const json params{{"provider", provider_params(config)},
                          {"train",
                           {{"seed", config.classifier.train.seed},
                            {"epochs", config.classifier.train.epochs},
                            {"learning_rate", config.classifier.train.learning_rate},
                            {"l2", config.classifier.train.l2}}}};
        const std::vector<std::string> outs{
            kClassifierArtifact,
            std::string(kTrainCacheRel) + "/" + descriptor.provider_id + ".vec",
            std::string(kTrainCacheRel) + "/" + descriptor.provider_id + ".idx"};
        results.push_back(run_unit(ctx, Stage::CLASSIFY, "*", std::move(inputs), params, outs,
                                   [&] {
                                       auto svc = make_service(config, ctx.run,
                                                               ctx.out / kTrainCacheRel);
                                       const auto labeled = nlp::load_labeled_tsv(labeled_path);
                                       const auto classifier = nlp::train_classifier(
                                           labeled, *svc.service, config.classifier.train);
                                       classifier.save(ctx.out / kClassifierArtifact);
                                   }));
        weights_file = ctx.out / kClassifierArtifact;
    } else {
        weights_file = config.resolve(config.classifier.weights_path);
        std::map<std::string, std::string> inputs{
            {"weights", external_input(weights_file, "classifier weights")}};
        const json params{{"provider", provider_params(config)}};
        results.push_back(
            run_unit(ctx, Stage::CLASSIFY, "*", std::move(inputs), params, {}, [] {}));
    }

    // Fail before any per-topic work when the weights cannot label what this
    // pipeline's provider embeds.
    const auto classifier = nlp::SentenceClassifier::load(weights_file);
    if (classifier.provider_id() != descriptor.provider_id) {
        throw ConfigError("classifier was trained on provider \"" + classifier.provider_id() +
                          "\" but the pipeline embeds with \"" + descriptor.provider_id + "\"");
    }

    const std::string weights_hash = hashing::sha256_file_hex(weights_file.string());
    for (const auto& topic : config.topics) {
        const std::string& id = topic.spec.topic_id;
        std::map<std::string, std::string> inputs{
            {"corpus", artifact_input(ctx.manifest, ctx.out, corpus_artifact(id), Stage::INGEST)},
            {"classifier", weights_hash}};
        const json params{{"provider", provider_params(config)}};
        const std::string out_name = sentences_artifact(id);
        results.push_back(run_unit(
            ctx, Stage::CLASSIFY, id, std::move(inputs), params, {out_name}, [&] {
                const auto records = corpus::load_corpus(ctx.out / corpus_artifact(id));
                std::vector<nlp::SentenceRef> sentences;
                for (const auto& record : records) {
                    auto refs = nlp::prepare_sentences(record.speech_id, record.text);
                    sentences.insert(sentences.end(), std::make_move_iterator(refs.begin()),
                                     std::make_move_iterator(refs.end()));
                }
                auto svc = make_service(config, ctx.run, ctx.out / topic_cache_rel(id));
                const auto units = nlp::classify(sentences, classifier, *svc.service);
                store_sentence_units(units, ctx.out / out_name);
            }));
    }
    return results;
}

StageResult stage_embed(StageCtx& ctx, const TopicConfig& topic) {
    const auto& config = ctx.config;
    const std::string& id = topic.spec.topic_id;
    const auto descriptor = descriptor_for(config);
    const bool generated = topic.axis.method == scaling::AxisMethod::GENERATED;

    std::map<std::string, std::string> inputs{
        {"sentences",
         artifact_input(ctx.manifest, ctx.out, sentences_artifact(id), Stage::CLASSIFY)}};
    if (generated) {
        inputs["bundle_pro"] =
            external_input(config.resolve(topic.axis.pro_bundle), "pro seed bundle");
        inputs["bundle_con"] =
            external_input(config.resolve(topic.axis.con_bundle), "con seed bundle");
    }
    const json params{{"provider", provider_params(config)}};
    const std::string vec_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".vec";
    const std::string idx_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".idx";
    return run_unit(ctx, Stage::EMBED, id, std::move(inputs), params, {vec_rel, idx_rel}, [&] {
        const auto units = load_sentence_units(ctx.out / sentences_artifact(id));
        const auto opinions = nlp::filter_opinions(units);
        if (opinions.empty()) {
            throw PreconditionError("topic \"" + id +
                                    "\" has no opinion sentences; nothing to scale");
        }
        std::vector<std::string> texts;
        texts.reserve(opinions.size());
        for (const auto& u : opinions) texts.push_back(u.text);
        if (generated) {
            const auto pro = load_bundle_checked(config, topic, seedgen::Side::PRO);
            const auto con = load_bundle_checked(config, topic, seedgen::Side::CON);
            texts.insert(texts.end(), pro.texts.begin(), pro.texts.end());
            texts.insert(texts.end(), con.texts.begin(), con.texts.end());
        }
        auto svc = make_service(config, ctx.run, ctx.out / topic_cache_rel(id));
        svc.service->embed_batch(texts);
    });
}

StageResult stage_profile(StageCtx& ctx, const TopicConfig& topic) {
    const auto& config = ctx.config;
    const std::string& id = topic.spec.topic_id;
    const auto descriptor = descriptor_for(config);
    const std::string vec_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".vec";
    const std::string idx_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".idx";
    std::map<std::string, std::string> inputs{
        {"corpus", artifact_input(ctx.manifest, ctx.out, corpus_artifact(id), Stage::INGEST)},
        {"sentences",
         artifact_input(ctx.manifest, ctx.out, sentences_artifact(id), Stage::CLASSIFY)},
        {"vectors", artifact_input(ctx.manifest, ctx.out, vec_rel, Stage::EMBED)},
        {"vector_index", artifact_input(ctx.manifest, ctx.out, idx_rel, Stage::EMBED)}};
    const json params{{"provider", provider_params(config)},
                      {"min_sentences", config.min_sentences},
                      {"normalize_sentence_vectors", config.normalize_sentence_vectors}};
    const std::string out_name = profiles_artifact(id);
    return run_unit(ctx, Stage::PROFILE, id, std::move(inputs), params, {out_name}, [&] {
        const auto records = corpus::load_corpus(ctx.out / corpus_artifact(id));
        std::map<std::string, const corpus::SpeechRecord*> by_speech;
        for (const auto& record : records) by_speech[record.speech_id] = &record;

        const auto units = load_sentence_units(ctx.out / sentences_artifact(id));
        const auto opinions = nlp::filter_opinions(units);
        std::vector<scaling::OpinionUnit> opinion_units;
        std::vector<std::string> texts;
        for (const auto& u : opinions) {
            const auto it = by_speech.find(u.speech_id);
            if (it == by_speech.end()) {
                throw IntegrityError("sentence artifact references speech " + u.speech_id +
                                     " absent from the corpus; rerun CLASSIFY");
            }
            opinion_units.push_back(scaling::OpinionUnit{u.speech_id, u.index,
                                                         it->second->speaker_name,
                                                         it->second->party, id});
            texts.push_back(u.text);
        }
        auto svc = make_service(config, ctx.run, ctx.out / topic_cache_rel(id));
        const auto vectors = svc.service->embed_batch(texts);
        const auto build = scaling::build_profiles(std::move(opinion_units), vectors,
                                                   config.min_sentences,
                                                   config.normalize_sentence_vectors);
        scaling::store_profiles(build, ctx.out / out_name);
    });
}

StageResult stage_axis(StageCtx& ctx, const TopicConfig& topic) {
    const auto& config = ctx.config;
    const std::string& id = topic.spec.topic_id;
    const auto descriptor = descriptor_for(config);
    const bool pair = topic.axis.method == scaling::AxisMethod::PAIR;

    std::map<std::string, std::string> inputs{
        {"profiles", artifact_input(ctx.manifest, ctx.out, profiles_artifact(id), Stage::PROFILE)}};
    json params{{"method", scaling::to_string(topic.axis.method)},
                {"provider", provider_params(config)}};
    if (pair) {
        params["pro_speaker"] = topic.axis.pro_speaker;
        params["con_speaker"] = topic.axis.con_speaker;
    } else {
        inputs["bundle_pro"] =
            external_input(config.resolve(topic.axis.pro_bundle), "pro seed bundle");
        inputs["bundle_con"] =
            external_input(config.resolve(topic.axis.con_bundle), "con seed bundle");
        const std::string vec_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".vec";
        const std::string idx_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".idx";
        inputs["vectors"] = artifact_input(ctx.manifest, ctx.out, vec_rel, Stage::EMBED);
        inputs["vector_index"] = artifact_input(ctx.manifest, ctx.out, idx_rel, Stage::EMBED);
        params["normalize_sentence_vectors"] = config.normalize_sentence_vectors;
    }
    const std::string out_name = axis_artifact(id);
    return run_unit(ctx, Stage::AXIS, id, std::move(inputs), params, {out_name}, [&] {
        scaling::ReferenceAxis axis;
        std::map<std::string, std::string> provenance;
        if (pair) {
            const auto build = scaling::load_profiles(ctx.out / profiles_artifact(id));
            const scaling::StanceProfile* pro = nullptr;
            const scaling::StanceProfile* con = nullptr;
            for (const auto& profile : build.profiles) {
                if (profile.speaker_name == topic.axis.pro_speaker) pro = &profile;
                if (profile.speaker_name == topic.axis.con_speaker) con = &profile;
            }
            if (!pro || !con) {
                const std::string& missing =
                    pro ? topic.axis.con_speaker : topic.axis.pro_speaker;
                throw PreconditionError("axis speaker \"" + missing +
                                        "\" has no stance profile for topic \"" + id +
                                        "\" (absent from corpus or below min_sentences)");
            }
            axis = scaling::build_axis_from_pair(*pro, *con);
            provenance = {{"pro_speaker", topic.axis.pro_speaker},
                          {"con_speaker", topic.axis.con_speaker}};
        } else {
            const auto pro = load_bundle_checked(config, topic, seedgen::Side::PRO);
            const auto con = load_bundle_checked(config, topic, seedgen::Side::CON);
            auto svc = make_service(config, ctx.run, ctx.out / topic_cache_rel(id));
            axis = scaling::build_axis_from_seeds(id, pro.texts, con.texts, *svc.service,
                                                  config.normalize_sentence_vectors);
            provenance = {{"pro_bundle_hash", seedgen::bundle_content_hash(pro)},
                          {"con_bundle_hash", seedgen::bundle_content_hash(con)},
                          {"seed_model", pro.model_id}};
        }
        scaling::store_axis(axis, ctx.out / out_name, provenance);
    });
}

StageResult stage_scale(StageCtx& ctx, const TopicConfig& topic) {
    const auto& config = ctx.config;
    const std::string& id = topic.spec.topic_id;
    std::map<std::string, std::string> inputs{
        {"profiles", artifact_input(ctx.manifest, ctx.out, profiles_artifact(id), Stage::PROFILE)},
        {"axis", artifact_input(ctx.manifest, ctx.out, axis_artifact(id), Stage::AXIS)}};
    const json params{{"group_count", config.group_count}};
    const std::string results_name = results_artifact(id);
    const std::string parties_name = parties_artifact(id);
    return run_unit(ctx, Stage::SCALE, id, std::move(inputs), params,
                    {results_name, parties_name}, [&] {
                        const auto build = scaling::load_profiles(ctx.out / profiles_artifact(id));
                        if (build.profiles.empty()) {
                            throw PreconditionError(
                                "topic \"" + id +
                                "\" has no stance profiles; every speaker fell below "
                                "min_sentences");
                        }
                        const auto axis = scaling::load_axis(ctx.out / axis_artifact(id));
                        std::vector<scaling::ProjectionResult> results;
                        results.reserve(build.profiles.size());
                        for (const auto& profile : build.profiles) {
                            results.push_back(scaling::project(profile, axis));
                        }
                        scaling::split_groups(results, config.group_count);
                        scaling::store_results(results, ctx.out / results_name);
                        scaling::store_party_summaries(scaling::party_summary(results),
                                                       ctx.out / parties_name);
                    });
}

StageResult stage_topics(StageCtx& ctx, const TopicConfig& topic) {
    const auto& config = ctx.config;
    const std::string& id = topic.spec.topic_id;
    const auto descriptor = descriptor_for(config);
    const std::string vec_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".vec";
    const std::string idx_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".idx";
    std::map<std::string, std::string> inputs{
        {"corpus", artifact_input(ctx.manifest, ctx.out, corpus_artifact(id), Stage::INGEST)},
        {"sentences",
         artifact_input(ctx.manifest, ctx.out, sentences_artifact(id), Stage::CLASSIFY)},
        {"results", artifact_input(ctx.manifest, ctx.out, results_artifact(id), Stage::SCALE)},
        {"vectors", artifact_input(ctx.manifest, ctx.out, vec_rel, Stage::EMBED)},
        {"vector_index", artifact_input(ctx.manifest, ctx.out, idx_rel, Stage::EMBED)}};
    if (!config.token_dict_path.empty()) {
        inputs["token_dict"] =
            external_input(config.resolve(config.token_dict_path), "token dictionary");
    }
    if (!config.stopwords_path.empty()) {
        inputs["stopwords"] = external_input(config.resolve(config.stopwords_path), "stop terms");
    }
    const json params{{"k", config.topics_k},
                      {"terms", config.topics_terms},
                      {"reducer", reducer_params(config.reducer)},
                      {"provider", provider_params(config)}};
    const std::string tsv_name = topics_artifact(id);
    const std::string text_name = topics_text_artifact(id);
    return run_unit(ctx, Stage::TOPICS, id, std::move(inputs), params, {tsv_name, text_name}, [&] {
        const auto records = corpus::load_corpus(ctx.out / corpus_artifact(id));
        std::map<std::string, std::string> speaker_of;
        for (const auto& record : records) speaker_of[record.speech_id] = record.speaker_name;

        const auto results = scaling::load_results(ctx.out / results_artifact(id));
        std::map<std::string, scaling::Group> group_of;
        for (const auto& r : results) {
            if (r.group) group_of[r.speaker_name] = *r.group;
        }

        const auto units = load_sentence_units(ctx.out / sentences_artifact(id));
        const auto opinions = nlp::filter_opinions(units);
        std::array<topics::GroupSentences, 3> groups;
        for (int g = 0; g < 3; ++g) groups[g].group = static_cast<scaling::Group>(g);
        for (const auto& u : opinions) {
            const auto speaker = speaker_of.find(u.speech_id);
            if (speaker == speaker_of.end()) continue;
            const auto group = group_of.find(speaker->second);
            if (group == group_of.end()) continue;  // speaker below min_sentences
            groups[static_cast<int>(group->second)].sentences.push_back(u.text);
        }
        auto svc = make_service(config, ctx.run, ctx.out / topic_cache_rel(id));
        for (auto& g : groups) {
            const auto vectors = svc.service->embed_batch(g.sentences);
            g.vectors.reserve(vectors.size());
            for (const auto& v : vectors) g.vectors.push_back(v.values);
        }
        const auto tokenizer = make_tokenizer(config);
        topics::TopicsOptions options;
        options.k = config.topics_k;
        options.terms = config.topics_terms;
        options.seed = config.reducer.seed;
        options.reducer = config.reducer.method;
        options.umap = config.reducer.umap;
        const auto report = topics::topics_report(
            std::vector<topics::GroupSentences>(groups.begin(), groups.end()), tokenizer,
            options);
        io::write_file_atomic(ctx.out / tsv_name, topics::render_topics_tsv(report));
        io::write_file_atomic(ctx.out / text_name, topics::render_topics_text(report));
    });
}

StageResult stage_plot(StageCtx& ctx, const TopicConfig& topic) {
    const auto& config = ctx.config;
    const std::string& id = topic.spec.topic_id;
    const auto descriptor = descriptor_for(config);
    const bool generated = topic.axis.method == scaling::AxisMethod::GENERATED;
    std::map<std::string, std::string> inputs{
        {"profiles", artifact_input(ctx.manifest, ctx.out, profiles_artifact(id), Stage::PROFILE)},
        {"axis", artifact_input(ctx.manifest, ctx.out, axis_artifact(id), Stage::AXIS)}};
    if (generated) {
        inputs["bundle_pro"] =
            external_input(config.resolve(topic.axis.pro_bundle), "pro seed bundle");
        inputs["bundle_con"] =
            external_input(config.resolve(topic.axis.con_bundle), "con seed bundle");
        const std::string vec_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".vec";
        const std::string idx_rel = topic_cache_rel(id) + "/" + descriptor.provider_id + ".idx";
        inputs["vectors"] = artifact_input(ctx.manifest, ctx.out, vec_rel, Stage::EMBED);
        inputs["vector_index"] = artifact_input(ctx.manifest, ctx.out, idx_rel, Stage::EMBED);
    }
    const json params{{"reducer", reducer_params(config.reducer)}};
    const std::string svg_name = plot_artifact(id);
    const std::string sidecar_name = plot_sidecar_artifact(id);
    return run_unit(ctx, Stage::PLOT, id, std::move(inputs), params, {svg_name, sidecar_name},
                    [&] {
                        const auto build = scaling::load_profiles(ctx.out / profiles_artifact(id));
                        const auto axis = scaling::load_axis(ctx.out / axis_artifact(id));
                        std::vector<reduce::InputPoint> points;
                        for (const auto& profile : build.profiles) {
                            points.push_back(reduce::InputPoint{
                                profile.speaker_name, reduce::PointKind::SPEAKER,
                                profile.party.empty()
                                    ? std::nullopt
                                    : std::optional<std::string>(profile.party),
                                profile.mean_embedding.values});
                        }
                        points.push_back(reduce::InputPoint{"anchor-pro",
                                                            reduce::PointKind::ANCHOR_PRO,
                                                            std::nullopt,
                                                            axis.anchor_pro.values});
                        points.push_back(reduce::InputPoint{"anchor-con",
                                                            reduce::PointKind::ANCHOR_CON,
                                                            std::nullopt,
                                                            axis.anchor_con.values});
                        if (generated) {
                            auto svc = make_service(config, ctx.run,
                                                    ctx.out / topic_cache_rel(id));
                            for (const auto side : {seedgen::Side::PRO, seedgen::Side::CON}) {
                                const auto bundle = load_bundle_checked(config, topic, side);
                                const auto vectors = svc.service->embed_batch(bundle.texts);
                                const std::string prefix =
                                    side == seedgen::Side::PRO ? "seed-pro-" : "seed-con-";
                                for (std::size_t i = 0; i < vectors.size(); ++i) {
                                    points.push_back(reduce::InputPoint{
                                        prefix + std::to_string(i + 1),
                                        reduce::PointKind::SEED_SENTENCE, std::nullopt,
                                        vectors[i].values});
                                }
                            }
                        }
                        const auto reduced = reduce::reduce_2d(points, config.reducer.method,
                                                               config.reducer.seed,
                                                               config.reducer.umap);
                        const reduce::PlotMeta meta{id,
                                                    scaling::to_string(axis.method),
                                                    axis.anchor_labels,
                                                    config.reducer.method,
                                                    config.reducer.seed,
                                                    config.reducer.umap};
                        const auto payload = reduce::plot_payload(reduced.points, meta);
                        io::write_file_atomic(ctx.out / svg_name, payload.svg);
                        io::write_file_atomic(ctx.out / sidecar_name, payload.sidecar);
                    });
}

StageResult stage_validate(StageCtx& ctx, const TopicConfig& topic) {
    const auto& config = ctx.config;
    const std::string& id = topic.spec.topic_id;
    std::map<std::string, std::string> inputs{
        {"results", artifact_input(ctx.manifest, ctx.out, results_artifact(id), Stage::SCALE)},
        {"expert", external_input(config.resolve(topic.expert_path), "expert placements")}};
    if (!topic.checks_path.empty()) {
        inputs["checks"] = external_input(config.resolve(topic.checks_path), "sign checks");
    }
    const json params{{"statistic", evalcmp::to_string(config.party_statistic)}};
    const std::string out_name = validation_artifact(id);
    auto result = run_unit(ctx, Stage::VALIDATE, id, std::move(inputs), params, {out_name}, [&] {
        const auto results = scaling::load_results(ctx.out / results_artifact(id));
        const auto positions = evalcmp::party_positions(results);
        const auto expert = evalcmp::load_expert(config.resolve(topic.expert_path).string());
        std::vector<evalcmp::CheckSpec> checks;
        if (!topic.checks_path.empty()) {
            const auto file = evalcmp::load_checks(config.resolve(topic.checks_path).string());
            if (file.topic_id != id) {
                throw ConfigError("checks file " + topic.checks_path + " is for topic \"" +
                                  file.topic_id + "\", expected \"" + id + "\"");
            }
            checks = file.checks;
        }
        const auto report =
            evalcmp::rank_agreement(id, positions, expert, checks, config.party_statistic);
        io::write_file_atomic(ctx.out / out_name,
                              evalcmp::validation_file_json(report, positions).dump(2) + "\n");
    });
    // Surface failing sign checks on cache hits too: the stored artifact is
    // the source of truth for pass/fail.
    const auto j = json::parse(io::read_file(ctx.out / out_name));
    const auto report = evalcmp::agreement_from_json(j.at("agreement"));
    for (const auto& check : report.sign_checks) {
        if (!check.passed) ++result.failed_checks;
    }
    return result;
}

}  // namespace

std::vector<StageResult> run_stage(Stage stage, const PipelineConfig& config,
                                   const RunContext& ctx) {
    const fs::path out = config.out();
    fs::create_directories(out);
    Manifest manifest(out / kManifestName);
    StageCtx sc{config, ctx, out, manifest};
    std::vector<StageResult> results;
    switch (stage) {
        case Stage::INGEST:
            for (const auto& topic : config.topics) results.push_back(stage_ingest(sc, topic));
            break;
        case Stage::CLASSIFY: {
            auto r = stage_classify(sc);
            results.insert(results.end(), r.begin(), r.end());
            break;
        }
        case Stage::EMBED:
            for (const auto& topic : config.topics) results.push_back(stage_embed(sc, topic));
            break;
        case Stage::PROFILE:
            for (const auto& topic : config.topics) results.push_back(stage_profile(sc, topic));
            break;
        case Stage::AXIS:
            for (const auto& topic : config.topics) results.push_back(stage_axis(sc, topic));
            break;
        case Stage::SCALE:
            for (const auto& topic : config.topics) results.push_back(stage_scale(sc, topic));
            break;
        case Stage::TOPICS:
            for (const auto& topic : config.topics) results.push_back(stage_topics(sc, topic));
            break;
        case Stage::PLOT:
            for (const auto& topic : config.topics) results.push_back(stage_plot(sc, topic));
            break;
        case Stage::VALIDATE:
            for (const auto& topic : config.topics) results.push_back(stage_validate(sc, topic));
            break;
    }
    return results;
}

RunSummary run_all(const PipelineConfig& config, const RunContext& ctx, Stage from) {
    RunSummary summary;
    for (int s = static_cast<int>(from); s <= static_cast<int>(Stage::VALIDATE); ++s) {
        auto results = run_stage(static_cast<Stage>(s), config, ctx);
        summary.results.insert(summary.results.end(), std::make_move_iterator(results.begin()),
                               std::make_move_iterator(results.end()));
    }
    return summary;
}

}  // namespace ideoaxis::pipeline
