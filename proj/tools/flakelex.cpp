// flakelex - predicts test flakiness from static source-code vocabulary.
//
// Subcommands: ingest, tokenize, featurize, train, eval, ablate, rank,
// crossval, predict. Exit codes: 0 success, 1 runtime/data error, 2 usage
// error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flakelex/corpus.hpp"
#include "flakelex/error.hpp"
#include "flakelex/experiment.hpp"
#include "flakelex/featurize.hpp"
#include "flakelex/io.hpp"
#include "flakelex/learn.hpp"
#include "flakelex/metrics.hpp"
#include "flakelex/rank.hpp"
#include "flakelex/textpipe.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace flakelex;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 42;
    bool json = false;
    bool quiet = false;
    std::string config_path;
};

std::ostream& info(const GlobalOptions& global) {
    static std::ofstream null_sink;
    if (global.quiet) {
        null_sink.setstate(std::ios::badbit);
        return null_sink;
    }
    return std::cout;
}

ExperimentConfig base_config(const GlobalOptions& global) {
    ExperimentConfig config;
    if (!global.config_path.empty())
        config = ExperimentConfig::from_key_values(read_file(global.config_path));
    config.seed = global.seed;
    return config;
}

std::vector<ClassifierKind> parse_classifier_list(const std::string& text) {
    std::vector<ClassifierKind> kinds;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        if (item == "all") {
            const auto& all = all_classifiers();
            return {all.begin(), all.end()};
        }
        auto kind = parse_classifier(item);
        if (!kind) throw CLI::ValidationError("--classifiers", "unknown classifier: " + item);
        kinds.push_back(*kind);
    }
    if (kinds.empty()) throw CLI::ValidationError("--classifiers", "empty classifier list");
    return kinds;
}

AblationConfig parse_ablation_or_fail(const std::string& id) {
    auto a = parse_ablation(id);
    if (!a) throw CLI::ValidationError("--ablation", "unknown ablation: " + id);
    return *a;
}

Corpus load_input_corpus(const std::string& path) {
    return load_corpus(resolve_data_path(path));
}

// Non-deterministic run details live in a sidecar, keeping the primary
// outputs byte-stable across reruns.
void write_meta_sidecar(const fs::path& out_dir, const std::string& command,
                        double duration_ms) {
    ordered_json meta;
    meta["command"] = command;
    meta["duration_ms"] = duration_ms;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    meta["timestamp_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    atomic_write(out_dir / "run_meta.json", meta.dump(2) + "\n");
}

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// --- ingest -------------------------------------------------------------------

enum class ProjectRule { ParentDir, FilePrefix, Fixed };

std::string derive_project(ProjectRule rule, const fs::path& file,
                           const fs::path& root, const std::string& fixed) {
    switch (rule) {
        case ProjectRule::Fixed:
            return fixed;
        case ProjectRule::ParentDir: {
            auto rel = fs::relative(file, root);
            return rel.has_parent_path() ? rel.parent_path().begin()->string()
                                         : root.filename().string();
        }
        case ProjectRule::FilePrefix: {
            auto stem = file.stem().string();
            auto cut = stem.find_first_of("_.");
            return cut == std::string::npos ? stem : stem.substr(0, cut);
        }
    }
    return fixed;
}

void ingest_tree(Corpus& corpus, const std::string& dir, Label label,
                 ProjectRule rule, const std::string& fixed) {
    const fs::path root = resolve_data_path(dir);
    if (!fs::is_directory(root)) throw Error("not a directory: " + root.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        auto body = read_file(file);
        if (body.empty()) continue;
        auto rel = fs::relative(file, root).string();
        for (auto& c : rel)
            if (c == '/' || c == '\\') c = '.';
        if (auto dot = rel.rfind('.'); dot != std::string::npos && dot > 0)
            rel = rel.substr(0, dot);  // drop the file extension
        corpus.cases.push_back(
            TestCase{derive_project(rule, file, root, fixed), rel, body, label});
    }
}

void cmd_ingest_dir(const GlobalOptions& global, const std::string& flaky_dir,
                    const std::string& nonflaky_dir, const std::string& unknown_dir,
                    const std::string& project_rule, const std::string& out) {
    ProjectRule rule = ProjectRule::ParentDir;
    std::string fixed;
    if (project_rule == "parent") rule = ProjectRule::ParentDir;
    else if (project_rule == "prefix") rule = ProjectRule::FilePrefix;
    else if (project_rule.rfind("fixed:", 0) == 0) {
        rule = ProjectRule::Fixed;
        fixed = project_rule.substr(6);
    } else {
        throw CLI::ValidationError("--project", "expected parent, prefix or fixed:<name>");
    }

    Corpus corpus;
    corpus.origin = "ingest";
    if (!flaky_dir.empty()) ingest_tree(corpus, flaky_dir, Label::Flaky, rule, fixed);
    if (!nonflaky_dir.empty())
        ingest_tree(corpus, nonflaky_dir, Label::NonFlaky, rule, fixed);
    if (!unknown_dir.empty())
        ingest_tree(corpus, unknown_dir, Label::Unknown, rule, fixed);

    auto deduped = dedupe(corpus);
    if (deduped.dropped)
        info(global) << "dropped " << deduped.dropped << " duplicate tests";
    if (deduped.label_conflicts)
        std::cerr << "warning: " << deduped.label_conflicts
                  << " duplicates had conflicting labels (first kept)\n";
    write_corpus(deduped.corpus, out, CorpusFormat::Csv);
    info(global) << "wrote " << deduped.corpus.size() << " cases to " << out << "\n";
}

std::map<std::string, std::string> parse_pair_list(const std::string& text,
                                                   const char* option) {
    std::map<std::string, std::string> pairs;
    std::istringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError(option, "expected key=value pairs");
        pairs[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return pairs;
}

void cmd_ingest_csv(const GlobalOptions& global, const std::string& in,
                    const std::string& mapping, const std::string& label_mapping,
                    const std::string& out) {
    const auto columns = parse_pair_list(mapping, "--map");
    for (const char* required : {"project", "qualified_name", "label", "body"})
        if (!columns.count(required))
            throw CLI::ValidationError("--map", std::string("missing mapping for ") + required);
    const auto label_values = parse_pair_list(label_mapping, "--label-map");

    auto corpus = load_foreign_csv(resolve_data_path(in), columns, label_values);
    write_corpus(corpus, out, CorpusFormat::Csv);
    info(global) << "wrote " << corpus.size() << " cases to " << out << "\n";
}

// --- tokenize / featurize -------------------------------------------------------

void cmd_tokenize(const GlobalOptions& global, const std::string& corpus_path,
                  const std::string& ablation_id_text, bool show,
                  const std::string& out) {
    const auto ablation = parse_ablation_or_fail(ablation_id_text);
    const auto pipeline = apply_ablation(ablation).pipeline;
    const auto corpus = load_input_corpus(corpus_path);

    std::string stream;
    std::size_t total = 0;
    std::set<std::string> distinct;
    for (const auto& c : corpus.cases) {
        auto tokens = run_pipeline(pipeline, c.body);
        total += tokens.size();
        distinct.insert(tokens.begin(), tokens.end());
        if (show || !out.empty()) {
            ordered_json line;
            line["qualified_name"] = c.qualified_name;
            line["tokens"] = tokens;
            stream += line.dump() + "\n";
        }
    }
    if (!out.empty()) atomic_write(out, stream);
    else if (show) std::cout << stream;
    info(global) << corpus.size() << " cases, " << total << " tokens, "
                 << distinct.size() << " distinct\n";
}

void cmd_featurize(const GlobalOptions& global, const std::string& corpus_path,
                   const std::string& ablation_id_text, const std::string& out) {
    const auto ablation = parse_ablation_or_fail(ablation_id_text);
    const auto corpus = load_input_corpus(corpus_path);
    const auto vocab = Vocabulary::build(corpus, ablation);

    std::string stream;
    for (const auto& c : corpus.cases) {
        const auto fv = vectorize(c, vocab, ablation);
        ordered_json line;
        line["qualified_name"] = c.qualified_name;
        line["label"] = std::string(label_name(c.label));
        line["loc"] = fv.loc;
        line["keyword_total"] = fv.keyword_total;
        ordered_json kw = ordered_json::object();
        for (std::size_t i = 0; i < kJavaKeywordCount; ++i)
            if (fv.keyword_counts[i])
                kw[std::string(java_keywords()[i])] = fv.keyword_counts[i];
        line["kw"] = std::move(kw);
        ordered_json tok = ordered_json::object();
        for (const auto& [col, count] : fv.token_counts)
            tok[vocab.tokens()[col]] = count;
        line["tok"] = std::move(tok);
        stream += line.dump() + "\n";
    }
    if (!out.empty()) atomic_write(out, stream);
    else std::cout << stream;
    info(global) << corpus.size() << " vectors, vocabulary " << vocab.token_count()
                 << " tokens, width " << vocab.width() << "\n";
}

// --- train / eval / predict ------------------------------------------------------

void cmd_train(const GlobalOptions& global, const std::string& corpus_path,
               const std::string& classifier, const std::string& ablation_id_text,
               const std::string& out) {
    Stopwatch watch;
    auto kind = parse_classifier(classifier);
    if (!kind) throw CLI::ValidationError("--classifier", "unknown classifier: " + classifier);
    const auto ablation = parse_ablation_or_fail(ablation_id_text);

    auto corpus = load_input_corpus(corpus_path);
    require_training_corpus(corpus);
    const auto vocab = Vocabulary::build(corpus, ablation);
    const auto matrix = vectorize_corpus(corpus, vocab, ablation);
    std::vector<Label> labels;
    for (const auto& c : corpus.cases) labels.push_back(c.label);

    auto model = train(ClassifierSpec{*kind, global.seed, {}}, matrix, labels);
    model.save(out, &vocab);
    write_meta_sidecar(fs::path(out).parent_path(), "train", watch.elapsed_ms());
    info(global) << "trained " << classifier_name(*kind) << " on " << corpus.size()
                 << " cases (" << (model.training_info().converged ? "converged"
                                                                   : "iteration cap")
                 << "), model written to " << out << "\n";
}

void cmd_eval_model(const GlobalOptions& global, const std::string& model_path,
                    const std::string& test_path, const std::string& json_out) {
    auto loaded = TrainedModel::load(resolve_data_path(model_path));
    if (!loaded.vocabulary)
        throw Error("model file does not embed a vocabulary; evaluation needs one");
    auto test = load_input_corpus(test_path);
    auto report = evaluate(loaded.model, test, *loaded.vocabulary, loaded.ablation,
                           test.origin);
    if (!json_out.empty()) atomic_write(json_out, report_json(report));
    if (global.json) std::cout << report_json(report);
    else {
        const EvalReport reports[] = {report};
        info(global) << reports_table(reports);
    }
}

void cmd_eval_experiment(const GlobalOptions& global, ExperimentConfig config) {
    Stopwatch watch;
    auto corpus = load_input_corpus(config.corpus);
    auto run = run_train_eval(config, corpus);

    const fs::path out_dir(config.out_dir);
    for (const auto& report : run.reports)
        atomic_write(out_dir / ("report_" + std::string(classifier_id(report.classifier)) +
                                ".json"),
                     report_json(report));
    atomic_write(out_dir / "table.csv", reports_csv(run.reports));
    atomic_write(out_dir / "table.txt", reports_table(run.reports));
    write_meta_sidecar(out_dir, "eval", watch.elapsed_ms());

    if (global.json) {
        for (const auto& report : run.reports) std::cout << report_json(report);
    } else {
        info(global) << reports_table(run.reports);
    }
}

void cmd_predict(const GlobalOptions& global, const std::string& model_path,
                 const std::string& corpus_path, const std::string& out) {
    auto loaded = TrainedModel::load(resolve_data_path(model_path));
    if (!loaded.vocabulary)
        throw Error("model file does not embed a vocabulary; prediction needs one");
    auto corpus = load_input_corpus(corpus_path);

    std::string stream;
    for (const auto& c : corpus.cases) {
        const auto row = to_row(vectorize(c, *loaded.vocabulary, loaded.ablation),
                                *loaded.vocabulary);
        const auto pred = loaded.model.predict(row, loaded.vocabulary->width());
        ordered_json line;
        line["qualified_name"] = c.qualified_name;
        line["label"] = std::string(label_name(pred.label));
        line["score"] = pred.score;
        stream += line.dump() + "\n";
    }
    if (!out.empty()) atomic_write(out, stream);
    else std::cout << stream;
    info(global) << corpus.size() << " predictions\n";
}

// --- ablate / rank / crossval -----------------------------------------------------

void cmd_ablate(const GlobalOptions& global, ExperimentConfig config) {
    Stopwatch watch;
    auto corpus = load_input_corpus(config.corpus);
    auto run = run_ablate(config, corpus);

    const fs::path out_dir(config.out_dir);
    atomic_write(out_dir / "ablate.csv", ablate_csv(run));
    atomic_write(out_dir / "ablate.txt", ablate_table(run));
    write_meta_sidecar(out_dir, "ablate", watch.elapsed_ms());

    if (global.json) std::cout << ablate_csv(run);
    else info(global) << ablate_table(run);
}

void cmd_rank(const GlobalOptions& global, const std::string& corpus_path,
              std::size_t top, const std::string& csv_out,
              const std::string& ablation_id_text) {
    auto corpus = load_input_corpus(corpus_path);
    std::vector<FeatureStat> stats;
    if (ablation_id_text.empty()) {
        stats = rank_features(corpus, RankConfig{}, top);
    } else {
        stats = rank_features(corpus, parse_ablation_or_fail(ablation_id_text), top);
    }
    if (!csv_out.empty()) atomic_write(csv_out, ranking_csv(stats));
    if (global.json) std::cout << ranking_csv(stats);
    else info(global) << ranking_table(stats);
}

void cmd_crossval(const GlobalOptions& global, ExperimentConfig config,
                  const std::string& mode_text) {
    Stopwatch watch;
    auto mode = parse_filter_mode(mode_text);
    if (!mode) throw CLI::ValidationError("--mode", "expected intra or inter");
    auto train_corpus = load_input_corpus(config.corpus);
    auto validation = load_input_corpus(config.validation);
    auto run = run_crossval(config, train_corpus, validation, *mode);

    const fs::path out_dir(config.out_dir);
    const std::string stem = "crossval_" + mode_text;
    atomic_write(out_dir / (stem + ".csv"), crossval_csv(run));
    atomic_write(out_dir / (stem + ".txt"), crossval_table(run));
    atomic_write(out_dir / (stem + "_ranking.csv"), ranking_csv(run.ranking));
    write_meta_sidecar(out_dir, "crossval", watch.elapsed_ms());

    if (global.json) {
        std::cout << crossval_csv(run);
    } else {
        info(global) << crossval_table(run) << "\ntop features (training + validation):\n"
                     << ranking_table(run.ranking);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"predicts test flakiness from static source-code vocabulary"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--seed", global.seed, "random seed")->capture_default_str();
    app.add_option("--config", global.config_path, "key=value config file");
    app.add_flag("--json", global.json, "machine-readable stdout");
    app.add_flag("--quiet", global.quiet, "suppress progress output");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "convert foreign corpora to the canonical schema");
    ingest->require_subcommand(1);
    auto* ingest_dir = ingest->add_subcommand("dir", "label by directory");
    std::string flaky_dir, nonflaky_dir, unknown_dir, project_rule = "parent";
    std::string ingest_out = "corpus.csv";
    ingest_dir->add_option("--flaky", flaky_dir, "directory of flaky test bodies");
    ingest_dir->add_option("--non-flaky", nonflaky_dir, "directory of non-flaky test bodies");
    ingest_dir->add_option("--unknown", unknown_dir, "directory of unlabeled test bodies");
    ingest_dir->add_option("--project", project_rule,
                           "project rule: parent, prefix or fixed:<name>")
        ->capture_default_str();
    ingest_dir->add_option("--out", ingest_out, "output corpus")->capture_default_str();
    ingest_dir->callback([&] {
        cmd_ingest_dir(global, flaky_dir, nonflaky_dir, unknown_dir, project_rule,
                       ingest_out);
    });

    auto* ingest_csv = ingest->add_subcommand("csv", "remap a foreign csv");
    std::string ingest_in, ingest_map, ingest_label_map;
    ingest_csv->add_option("--in", ingest_in, "foreign csv")->required();
    ingest_csv->add_option("--map", ingest_map,
                           "column mapping, e.g. project=proj,qualified_name=test,...")
        ->required();
    ingest_csv->add_option("--label-map", ingest_label_map,
                           "label value mapping, e.g. 1=flaky,0=non-flaky");
    ingest_csv->add_option("--out", ingest_out, "output corpus")->capture_default_str();
    ingest_csv->callback([&] {
        cmd_ingest_csv(global, ingest_in, ingest_map, ingest_label_map, ingest_out);
    });

    // tokenize
    auto* tokenize = app.add_subcommand("tokenize", "run the token pipeline");
    std::string tok_corpus, tok_ablation = "all-features", tok_out;
    bool tok_show = false;
    tokenize->add_option("--corpus", tok_corpus, "input corpus")->required();
    tokenize->add_option("--ablation", tok_ablation, "pipeline configuration")
        ->capture_default_str();
    tokenize->add_flag("--show", tok_show, "stream token lists as JSONL");
    tokenize->add_option("--out", tok_out, "write the JSONL stream to a file");
    tokenize->callback(
        [&] { cmd_tokenize(global, tok_corpus, tok_ablation, tok_show, tok_out); });

    // featurize
    auto* featurize = app.add_subcommand("featurize", "emit sparse feature vectors");
    std::string feat_corpus, feat_ablation = "all-features", feat_out;
    featurize->add_option("--corpus", feat_corpus, "input corpus")->required();
    featurize->add_option("--ablation", feat_ablation, "feature configuration")
        ->capture_default_str();
    featurize->add_option("--out", feat_out, "output JSONL (stdout when absent)");
    featurize->callback(
        [&] { cmd_featurize(global, feat_corpus, feat_ablation, feat_out); });

    // train
    auto* train_cmd = app.add_subcommand("train", "train one classifier on a full corpus");
    std::string train_corpus, train_classifier = "rf", train_ablation = "all-features";
    std::string train_out = "model.flx";
    train_cmd->add_option("--corpus", train_corpus, "labeled training corpus")->required();
    train_cmd->add_option("--classifier", train_classifier,
                          "rf, dt, nb, svm, knn, lr, lda or perceptron")
        ->capture_default_str();
    train_cmd->add_option("--ablation", train_ablation, "feature configuration")
        ->capture_default_str();
    train_cmd->add_option("--out", train_out, "model file")->capture_default_str();
    train_cmd->callback(
        [&] { cmd_train(global, train_corpus, train_classifier, train_ablation, train_out); });

    // eval
    auto* eval_cmd = app.add_subcommand(
        "eval", "evaluate a model file, or run the split/train/evaluate experiment");
    std::string eval_model, eval_test, eval_json_out, eval_corpus, eval_classifiers;
    double eval_fraction = 0.8;
    std::string eval_ablation = "all-features", eval_out_dir = ".";
    eval_cmd->add_option("--model", eval_model, "trained model file");
    eval_cmd->add_option("--test", eval_test, "held-out corpus (model mode)");
    eval_cmd->add_option("--json-out", eval_json_out, "write the report JSON here");
    eval_cmd->add_option("--corpus", eval_corpus, "labeled corpus (experiment mode)");
    eval_cmd->add_option("--classifiers", eval_classifiers,
                         "comma-separated list or 'all' (experiment mode)");
    eval_cmd->add_option("--train-fraction", eval_fraction, "training share of the split")
        ->capture_default_str();
    eval_cmd->add_option("--ablation", eval_ablation, "feature configuration")
        ->capture_default_str();
    eval_cmd->add_option("--out-dir", eval_out_dir, "report directory")
        ->capture_default_str();
    eval_cmd->callback([&] {
        if (!eval_model.empty()) {
            if (eval_test.empty())
                throw CLI::ValidationError("--test", "model mode needs --test");
            cmd_eval_model(global, eval_model, eval_test, eval_json_out);
            return;
        }
        ExperimentConfig config = base_config(global);
        if (!eval_corpus.empty()) config.corpus = eval_corpus;
        if (config.corpus.empty())
            throw CLI::ValidationError("--corpus", "experiment mode needs --corpus");
        if (!eval_classifiers.empty())
            config.classifiers = parse_classifier_list(eval_classifiers);
        if (eval_cmd->count("--train-fraction")) config.train_fraction = eval_fraction;
        if (eval_cmd->count("--ablation"))
            config.ablation = parse_ablation_or_fail(eval_ablation);
        if (eval_cmd->count("--out-dir")) config.out_dir = eval_out_dir;
        cmd_eval_experiment(global, std::move(config));
    });

    // ablate
    auto* ablate_cmd = app.add_subcommand("ablate", "run the nine feature ablations");
    std::string ablate_corpus, ablate_classifiers, ablate_out_dir = ".";
    double ablate_fraction = 0.8;
    ablate_cmd->add_option("--corpus", ablate_corpus, "labeled corpus")->required();
    ablate_cmd->add_option("--classifiers", ablate_classifiers,
                           "comma-separated list or 'all' (default rf,svm)");
    ablate_cmd->add_option("--train-fraction", ablate_fraction, "training share")
        ->capture_default_str();
    ablate_cmd->add_option("--out-dir", ablate_out_dir, "output directory")
        ->capture_default_str();
    ablate_cmd->callback([&] {
        ExperimentConfig config = base_config(global);
        config.corpus = ablate_corpus;
        config.classifiers.clear();
        if (!ablate_classifiers.empty())
            config.classifiers = parse_classifier_list(ablate_classifiers);
        if (ablate_cmd->count("--train-fraction")) config.train_fraction = ablate_fraction;
        config.out_dir = ablate_out_dir;
        cmd_ablate(global, std::move(config));
    });

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "rank features by information gain");
    std::string rank_corpus, rank_csv_out, rank_ablation;
    std::size_t rank_top = 20;
    rank_cmd->add_option("--corpus", rank_corpus, "labeled corpus")->required();
    rank_cmd->add_option("--top", rank_top, "how many features to keep (0 = all)")
        ->capture_default_str();
    rank_cmd->add_option("--csv", rank_csv_out, "write the ranking CSV here");
    rank_cmd->add_option("--ablation", rank_ablation,
                         "rank under an ablation pipeline instead of the default "
                         "(whole, lowercased identifiers)");
    rank_cmd->callback(
        [&] { cmd_rank(global, rank_corpus, rank_top, rank_csv_out, rank_ablation); });

    // crossval
    auto* crossval_cmd =
        app.add_subcommand("crossval", "project-filtered recall-only validation");
    std::string cv_train, cv_validation, cv_mode = "intra", cv_classifiers,
                cv_out_dir = ".";
    crossval_cmd->add_option("--train", cv_train, "labeled training corpus")->required();
    crossval_cmd->add_option("--validation", cv_validation, "flaky-only corpus")
        ->required();
    crossval_cmd->add_option("--mode", cv_mode, "intra or inter")->capture_default_str();
    crossval_cmd->add_option("--classifiers", cv_classifiers,
                             "comma-separated list or 'all'");
    crossval_cmd->add_option("--out-dir", cv_out_dir, "output directory")
        ->capture_default_str();
    crossval_cmd->callback([&] {
        ExperimentConfig config = base_config(global);
        config.corpus = cv_train;
        config.validation = cv_validation;
        if (!cv_classifiers.empty())
            config.classifiers = parse_classifier_list(cv_classifiers);
        config.out_dir = cv_out_dir;
        cmd_crossval(global, std::move(config), cv_mode);
    });

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "score a corpus with a model");
    std::string pred_model, pred_corpus, pred_out;
    predict_cmd->add_option("--model", pred_model, "trained model file")->required();
    predict_cmd->add_option("--corpus", pred_corpus, "corpus to score")->required();
    predict_cmd->add_option("--out", pred_out, "output JSONL (stdout when absent)");
    predict_cmd->callback([&] { cmd_predict(global, pred_model, pred_corpus, pred_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
