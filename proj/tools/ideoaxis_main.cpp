// Command-line front end: pipeline stages driven by a config file, plus
// standalone helpers (validate/topics on stored artifacts, seed generation,
// classifier training). Exit codes: 0 success, 1 stage or check failure,
// 2 configuration/usage error.

#include <array>
#include <cstdint>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"
#include "ideoaxis/common/utf8.hpp"
#include "ideoaxis/corpus/store.hpp"
#include "ideoaxis/embedding/ops.hpp"
#include "ideoaxis/embedding/provider.hpp"
#include "ideoaxis/evalcmp/evalcmp.hpp"
#include "ideoaxis/nlproc/classifier.hpp"
#include "ideoaxis/pipeline/pipeline.hpp"
#include "ideoaxis/scaling/scaling.hpp"
#include "ideoaxis/seedgen/seedgen.hpp"
#include "ideoaxis/topics/topics.hpp"

namespace {

using ideoaxis::ConfigError;

struct PipelineOpts {
    std::string config;
    bool offline = false;
    std::string from;
};

struct ValidateOpts {
    std::string results;
    std::string expert;
    std::string checks;
    std::string statistic = "median";
    std::string out;
};

struct TopicsOpts {
    std::string results;
    std::string sentences;
    std::string corpus;
    std::string out;
    int k = 5;
    int terms = 10;
    std::uint64_t seed = 0;
    std::string reducer = "pca";
    std::string provider = "ngram";
    int dimension = 256;
    std::uint64_t provider_seed = 0;
    std::string dict;
    std::string stopwords;
    bool no_stopwords = false;
};

struct SeedgenOpts {
    std::string topic;
    std::string side;
    std::string prompt_file;
    int n = 5;
    std::string out;
    std::string base_url;
    std::string model;
    std::string api_key_env = "IDEOAXIS_CHAT_API_KEY";
};

struct TrainOpts {
    std::string labeled;
    std::string out;
    std::string provider = "ngram";
    int dimension = 256;
    std::uint64_t provider_seed = 0;
    std::uint64_t seed = 0;
    int epochs = 300;
    double learning_rate = 2.0;
    double l2 = 1e-4;
    double eval_fraction = 0.2;
    std::uint64_t split_seed = 0;
};

std::unique_ptr<ideoaxis::emb::EmbeddingProvider> standalone_provider(const std::string& kind,
                                                                      int dimension,
                                                                      std::uint64_t seed) {
    if (dimension < 2) throw ConfigError("--dimension must be at least 2");
    if (kind == "mock") {
        return std::make_unique<ideoaxis::emb::MockProvider>(seed,
                                                             static_cast<std::size_t>(dimension));
    }
    if (kind == "ngram") {
        return std::make_unique<ideoaxis::emb::NgramProvider>(static_cast<std::size_t>(dimension));
    }
    throw ConfigError("unknown provider \"" + kind + "\" (expected mock or ngram)");
}

int run_pipeline(const PipelineOpts& opts, ideoaxis::pipeline::Stage target,
                 ideoaxis::pipeline::Stage default_from) {
    namespace pl = ideoaxis::pipeline;
    const auto config = pl::load_config(opts.config);
    const pl::RunContext ctx{opts.offline};
    const pl::Stage from =
        opts.from.empty() ? default_from : pl::stage_from_string(opts.from);
    if (static_cast<int>(from) > static_cast<int>(target)) {
        throw ConfigError("--from " + pl::to_string(from) + " is after the requested stage " +
                          pl::to_string(target));
    }
    int failed_checks = 0;
    for (int s = static_cast<int>(from); s <= static_cast<int>(target); ++s) {
        const auto stage = static_cast<pl::Stage>(s);
        const auto results = pl::run_stage(stage, config, ctx);
        for (const auto& r : results) {
            std::cout << pl::to_string(r.stage) << " " << r.unit << " " << r.status;
            if (r.failed_checks > 0) {
                std::cout << " (" << r.failed_checks << " sign check"
                          << (r.failed_checks == 1 ? "" : "s") << " failed)";
            }
            std::cout << "\n";
            failed_checks += r.failed_checks;
        }
    }
    std::cout << "artifacts in " << config.out().string() << "\n";
    if (failed_checks > 0) {
        std::cerr << "sign checks failed: " << failed_checks << "\n";
        return 1;
    }
    return 0;
}

int run_validate_standalone(const ValidateOpts& opts) {
    namespace ec = ideoaxis::evalcmp;
    if (opts.results.empty() || opts.expert.empty()) {
        throw ConfigError("validate needs --results and --expert "
                          "(or --config to validate inside a pipeline run)");
    }
    const auto results = ideoaxis::scaling::load_results(opts.results);
    if (results.empty()) {
        throw ideoaxis::PreconditionError("results file " + opts.results + " holds no speakers");
    }
    const std::string topic_id = results.front().topic_id;
    const auto positions = ec::party_positions(results);
    const auto expert = ec::load_expert(opts.expert);
    std::vector<ec::CheckSpec> checks;
    if (!opts.checks.empty()) {
        const auto file = ec::load_checks(opts.checks);
        if (file.topic_id != topic_id) {
            throw ConfigError("checks file " + opts.checks + " is for topic \"" + file.topic_id +
                              "\", results are for \"" + topic_id + "\"");
        }
        checks = file.checks;
    }
    const auto statistic = ec::statistic_from_string(opts.statistic);
    const auto report = ec::rank_agreement(topic_id, positions, expert, checks, statistic);
    const auto j = ec::validation_file_json(report, positions);
    if (!opts.out.empty()) {
        ideoaxis::io::write_file_atomic(opts.out, j.dump(2) + "\n");
    } else {
        std::cout << j.dump(2) << "\n";
    }
    std::cout << "topic " << topic_id << ": spearman=" << ideoaxis::io::format_double(
                     report.spearman_rho)
              << " kendall=" << ideoaxis::io::format_double(report.kendall_tau)
              << " pairwise_accuracy=" << ideoaxis::io::format_double(report.pairwise_accuracy)
              << " (" << report.n_common_parties << " parties, " << report.n_expert_pairs
              << " ordered pairs)\n";
    for (const auto& check : report.sign_checks) {
        std::cout << (check.passed ? "  [pass] " : "  [FAIL] ") << check.description << "\n";
    }
    return report.all_checks_passed() ? 0 : 1;
}

int run_topics_standalone(const TopicsOpts& opts) {
    namespace tp = ideoaxis::topics;
    if (opts.results.empty() || opts.sentences.empty() || opts.corpus.empty() ||
        opts.out.empty()) {
        throw ConfigError("topics needs --results, --sentences, --corpus, and --out "
                          "(or --config to run inside a pipeline)");
    }
    const auto records = ideoaxis::corpus::load_corpus(opts.corpus);
    std::map<std::string, std::string> speaker_of;
    for (const auto& record : records) speaker_of[record.speech_id] = record.speaker_name;

    const auto results = ideoaxis::scaling::load_results(opts.results);
    std::map<std::string, ideoaxis::scaling::Group> group_of;
    for (const auto& r : results) {
        if (r.group) group_of[r.speaker_name] = *r.group;
    }

    const auto units = ideoaxis::pipeline::load_sentence_units(opts.sentences);
    const auto opinions = ideoaxis::nlp::filter_opinions(units);
    std::array<tp::GroupSentences, 3> groups;
    for (int g = 0; g < 3; ++g) groups[g].group = static_cast<ideoaxis::scaling::Group>(g);
    for (const auto& u : opinions) {
        const auto speaker = speaker_of.find(u.speech_id);
        if (speaker == speaker_of.end()) continue;
        const auto group = group_of.find(speaker->second);
        if (group == group_of.end()) continue;
        groups[static_cast<int>(group->second)].sentences.push_back(u.text);
    }

    auto provider = standalone_provider(opts.provider, opts.dimension, opts.provider_seed);
    ideoaxis::emb::EmbeddingService service(provider.get(), nullptr);
    for (auto& g : groups) {
        const auto vectors = service.embed_batch(g.sentences);
        g.vectors.reserve(vectors.size());
        for (const auto& v : vectors) g.vectors.push_back(v.values);
    }

    std::vector<std::string> dictionary;
    std::vector<std::string> stopwords;
    if (!opts.dict.empty()) dictionary = tp::load_term_list(opts.dict);
    if (!opts.stopwords.empty()) stopwords = tp::load_term_list(opts.stopwords);
    tp::Tokenizer tokenizer(std::move(dictionary), std::move(stopwords));
    if (opts.no_stopwords) tokenizer.set_stopwords_enabled(false);

    tp::TopicsOptions options;
    options.k = opts.k;
    options.terms = opts.terms;
    options.seed = opts.seed;
    options.reducer = ideoaxis::reduce::method_from_string(opts.reducer);
    const auto report = tp::topics_report(
        std::vector<tp::GroupSentences>(groups.begin(), groups.end()), tokenizer, options);
    ideoaxis::io::write_file_atomic(opts.out, tp::render_topics_tsv(report));
    std::cout << tp::render_topics_text(report);
    std::cout << "wrote " << opts.out << "\n";
    return 0;
}

int run_seedgen(const SeedgenOpts& opts) {
    namespace sg = ideoaxis::seedgen;
    const auto side = sg::side_from_string(opts.side);
    if (opts.n < 1) throw ConfigError("--n must be at least 1");
    const std::string prompt = ideoaxis::utf8::trim(ideoaxis::io::read_file(opts.prompt_file));
    if (prompt.empty()) {
        throw ConfigError("prompt file " + opts.prompt_file + " is empty");
    }
    sg::HttpChatClient client(opts.base_url, opts.model, opts.api_key_env);
    sg::GenerateReport report;
    const auto bundle = sg::generate_seeds(opts.topic, side, prompt, opts.n, client, &report);
    sg::save_seeds(bundle, opts.out);
    std::cout << "wrote " << bundle.texts.size() << " " << sg::to_string(bundle.side)
              << " seeds for topic " << bundle.topic_id << " to " << opts.out << "\n"
              << "content hash " << sg::bundle_content_hash(bundle) << "\n";
    if (report.empty_retries > 0) {
        std::cout << "(" << report.empty_retries << " empty completions re-requested)\n";
    }
    return 0;
}

int run_train_classifier(const TrainOpts& opts) {
    namespace nlp = ideoaxis::nlp;
    if (opts.eval_fraction < 0.0 || opts.eval_fraction >= 1.0) {
        throw ConfigError("--eval-fraction must be in [0, 1)");
    }
    const auto all = nlp::load_labeled_tsv(opts.labeled);
    auto provider = standalone_provider(opts.provider, opts.dimension, opts.provider_seed);
    ideoaxis::emb::EmbeddingService service(provider.get(), nullptr);
    nlp::TrainOptions train_options;
    train_options.seed = opts.seed;
    train_options.epochs = opts.epochs;
    train_options.learning_rate = opts.learning_rate;
    train_options.l2 = opts.l2;

    if (opts.eval_fraction > 0.0) {
        const auto [train, eval] =
            nlp::split_labeled(all, 1.0 - opts.eval_fraction, opts.split_seed);
        nlp::TrainReport report;
        nlp::train_classifier(train, service, train_options, &eval, &report);
        std::cout << "held-out macro-F1 "
                  << ideoaxis::io::format_double(report.heldout_macro_f1.value_or(0.0)) << " ("
                  << report.n_train << " train / " << report.n_eval << " eval)\n";
    }
    const auto final_model = nlp::train_classifier(all, service, train_options);
    final_model.save(opts.out);
    std::cout << "wrote weights for provider " << final_model.provider_id() << " to " << opts.out
              << " (trained on all " << all.items.size() << " examples)\n";
    return 0;
}

void add_pipeline_options(CLI::App* cmd, PipelineOpts& opts, bool config_required) {
    auto* config = cmd->add_option("--config", opts.config, "pipeline configuration file");
    if (config_required) config->required();
    cmd->add_flag("--offline", opts.offline, "never touch the network; all inputs must be local");
    cmd->add_option("--from", opts.from,
                    "rerun starting at this stage (INGEST..VALIDATE); earlier artifacts are "
                    "reused as-is");
}

}  // namespace

int main(int argc, char** argv) {
    namespace pl = ideoaxis::pipeline;

    CLI::App app{"ideoaxis: estimates per-legislator positions on policy topics from "
                 "parliamentary speech embeddings"};
    app.require_subcommand(1);

    // Stage subcommands share one option set; `run` executes through VALIDATE.
    const std::vector<std::pair<std::string, pl::Stage>> stage_commands = {
        {"run", pl::Stage::VALIDATE},      {"ingest", pl::Stage::INGEST},
        {"classify", pl::Stage::CLASSIFY}, {"embed", pl::Stage::EMBED},
        {"profile", pl::Stage::PROFILE},   {"axis", pl::Stage::AXIS},
        {"scale", pl::Stage::SCALE},       {"plot", pl::Stage::PLOT}};
    std::map<std::string, PipelineOpts> pipeline_opts;
    std::map<std::string, CLI::App*> stage_apps;
    for (const auto& [name, stage] : stage_commands) {
        CLI::App* cmd = app.add_subcommand(
            name, name == "run" ? "run every pipeline stage in dependency order"
                                : "run the " + pl::to_string(stage) + " pipeline stage");
        add_pipeline_options(cmd, pipeline_opts[name], /*config_required=*/true);
        stage_apps[name] = cmd;
    }

    // `topics` and `validate` run either inside a pipeline (--config) or
    // standalone against stored artifacts.
    PipelineOpts topics_pipeline;
    TopicsOpts topics_opts;
    CLI::App* topics_cmd = app.add_subcommand(
        "topics", "cluster grouped opinion sentences and rank their key terms");
    add_pipeline_options(topics_cmd, topics_pipeline, /*config_required=*/false);
    topics_cmd->add_option("--results", topics_opts.results, "projection results table");
    topics_cmd->add_option("--sentences", topics_opts.sentences, "classified sentences artifact");
    topics_cmd->add_option("--corpus", topics_opts.corpus, "stored corpus artifact");
    topics_cmd->add_option("--out", topics_opts.out, "output table path");
    topics_cmd->add_option("--k", topics_opts.k, "clusters per group");
    topics_cmd->add_option("--terms", topics_opts.terms, "terms per cluster");
    topics_cmd->add_option("--seed", topics_opts.seed, "clustering/reduction seed");
    topics_cmd->add_option("--reducer", topics_opts.reducer, "2D reducer: pca or umap");
    topics_cmd->add_option("--provider", topics_opts.provider, "embedding provider: ngram or mock");
    topics_cmd->add_option("--dimension", topics_opts.dimension, "embedding dimension");
    topics_cmd->add_option("--provider-seed", topics_opts.provider_seed, "mock provider seed");
    topics_cmd->add_option("--dict", topics_opts.dict, "content-word dictionary file");
    topics_cmd->add_option("--stopwords", topics_opts.stopwords, "stop-term file");
    topics_cmd->add_flag("--no-stopwords", topics_opts.no_stopwords,
                         "keep stop terms in the token stream");

    PipelineOpts validate_pipeline;
    ValidateOpts validate_opts;
    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "compare projected party positions against expert placements");
    add_pipeline_options(validate_cmd, validate_pipeline, /*config_required=*/false);
    validate_cmd->add_option("--results", validate_opts.results, "projection results table");
    validate_cmd->add_option("--expert", validate_opts.expert, "expert placement table");
    validate_cmd->add_option("--checks", validate_opts.checks, "sign-check file");
    validate_cmd->add_option("--statistic", validate_opts.statistic,
                             "party position statistic: median or mean");
    validate_cmd->add_option("--out", validate_opts.out, "write the report here instead of stdout");

    SeedgenOpts seedgen_opts;
    CLI::App* seedgen_cmd = app.add_subcommand(
        "seedgen", "generate pro/contra reference speeches via a chat-completions service");
    seedgen_cmd->add_option("--topic", seedgen_opts.topic, "topic id")->required();
    seedgen_cmd->add_option("--side", seedgen_opts.side, "pro or con")->required();
    seedgen_cmd->add_option("--prompt-file", seedgen_opts.prompt_file, "file holding the prompt")
        ->required();
    seedgen_cmd->add_option("--n", seedgen_opts.n, "number of seed texts");
    seedgen_cmd->add_option("--out", seedgen_opts.out, "bundle output path")->required();
    seedgen_cmd->add_option("--base-url", seedgen_opts.base_url, "chat service base URL")
        ->required();
    seedgen_cmd->add_option("--model", seedgen_opts.model, "model identifier")->required();
    seedgen_cmd->add_option("--api-key-env", seedgen_opts.api_key_env,
                            "environment variable holding the bearer token");

    TrainOpts train_opts;
    CLI::App* train_cmd = app.add_subcommand(
        "train-classifier", "train the sentence-type classifier from a labeled TSV");
    train_cmd->add_option("--labeled", train_opts.labeled, "labeled sentences (text<TAB>label)")
        ->required();
    train_cmd->add_option("--out", train_opts.out, "weights output path")->required();
    train_cmd->add_option("--provider", train_opts.provider, "embedding provider: ngram or mock");
    train_cmd->add_option("--dimension", train_opts.dimension, "embedding dimension");
    train_cmd->add_option("--provider-seed", train_opts.provider_seed, "mock provider seed");
    train_cmd->add_option("--seed", train_opts.seed, "training shuffle seed");
    train_cmd->add_option("--epochs", train_opts.epochs, "gradient-descent epochs");
    train_cmd->add_option("--learning-rate", train_opts.learning_rate, "gradient step size");
    train_cmd->add_option("--l2", train_opts.l2, "L2 regularization strength");
    train_cmd->add_option("--eval-fraction", train_opts.eval_fraction,
                          "held-out fraction reported before the final full-data fit");
    train_cmd->add_option("--split-seed", train_opts.split_seed, "held-out split seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const auto& [name, stage] : stage_commands) {
            if (app.got_subcommand(stage_apps[name])) {
                return run_pipeline(pipeline_opts[name], stage,
                                    name == "run" ? pl::Stage::INGEST : stage);
            }
        }
        if (app.got_subcommand(topics_cmd)) {
            if (!topics_pipeline.config.empty()) {
                if (!topics_opts.results.empty() || !topics_opts.out.empty()) {
                    throw ConfigError("--results/--out are only valid without --config");
                }
                return run_pipeline(topics_pipeline, pl::Stage::TOPICS, pl::Stage::TOPICS);
            }
            if (topics_pipeline.offline || !topics_pipeline.from.empty()) {
                throw ConfigError("--offline/--from need --config");
            }
            return run_topics_standalone(topics_opts);
        }
        if (app.got_subcommand(validate_cmd)) {
            if (!validate_pipeline.config.empty()) {
                if (!validate_opts.results.empty() || !validate_opts.out.empty()) {
                    throw ConfigError("--results/--out are only valid without --config");
                }
                return run_pipeline(validate_pipeline, pl::Stage::VALIDATE, pl::Stage::VALIDATE);
            }
            if (validate_pipeline.offline || !validate_pipeline.from.empty()) {
                throw ConfigError("--offline/--from need --config");
            }
            return run_validate_standalone(validate_opts);
        }
        if (app.got_subcommand(seedgen_cmd)) return run_seedgen(seedgen_opts);
        if (app.got_subcommand(train_cmd)) return run_train_classifier(train_opts);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const ideoaxis::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ideoaxis::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
