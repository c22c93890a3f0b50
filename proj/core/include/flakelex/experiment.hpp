#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "flakelex/corpus.hpp"
#include "flakelex/featurize.hpp"
#include "flakelex/learn.hpp"
#include "flakelex/metrics.hpp"
#include "flakelex/rank.hpp"

namespace flakelex {

// Settings shared by the experiment commands. The defaults (80/20 split,
// seed 42, all features, all eight classifiers) are the reference setup.
struct ExperimentConfig {
    std::string corpus;      // labeled corpus path
    std::string validation;  // flaky-only corpus path, cross-validation only
    AblationConfig ablation = AblationConfig::AllFeatures;
    std::vector<ClassifierKind> classifiers;  // empty means all eight
    double train_fraction = 0.8;
    std::uint64_t seed = 42;
    std::string out_dir = ".";

    std::vector<ClassifierKind> resolved_classifiers() const;

    // flat key=value serialization (one pair per line)
    std::string to_key_values() const;
    static ExperimentConfig from_key_values(const std::string& text);
};

// Resolves a corpus path, falling back to $FLAKELEX_DATA_DIR when the plain
// path does not exist.
std::filesystem::path resolve_data_path(const std::string& path);

struct TrainEvalRun {
    std::vector<EvalReport> reports;  // one per classifier, in request order
    Vocabulary vocabulary;
    std::vector<TrainedModel> models;
};

// split -> featurize -> train every classifier -> evaluate on the held-out side
TrainEvalRun run_train_eval(const ExperimentConfig& config, const Corpus& corpus);

struct AblateRun {
    std::vector<ClassifierKind> classifiers;
    // reports[c][a] pairs classifiers with the nine ablation rows in order
    std::vector<std::vector<EvalReport>> reports;
};

AblateRun run_ablate(const ExperimentConfig& config, const Corpus& corpus);

struct CrossvalRow {
    ClassifierKind classifier = ClassifierKind::RandomForest;
    RecallOnlyReport report;
};

struct CrossvalRun {
    FilterMode mode = FilterMode::Intra;
    std::size_t validation_cases = 0;
    std::size_t validation_projects = 0;
    std::size_t dropped_duplicates = 0;
    std::vector<CrossvalRow> rows;      // sorted by recall, descending
    std::vector<FeatureStat> ranking;   // top 20 over training + filtered validation
};

// Trains on the full training corpus, filters the flaky-only validation
// corpus by project, and reports recall per classifier.
CrossvalRun run_crossval(const ExperimentConfig& config, const Corpus& train,
                         const Corpus& validation, FilterMode mode);

// --- deterministic renderers --------------------------------------------------

std::string reports_csv(std::span<const EvalReport> reports);
std::string reports_table(std::span<const EvalReport> reports);
std::string report_json(const EvalReport& report);  // fields: classifier,
    // precision, recall, f1, mcc, auc, tp, fp, fn, tn, seed, dataset
std::string ablate_csv(const AblateRun& run);
std::string ablate_table(const AblateRun& run);
std::string crossval_csv(const CrossvalRun& run);
std::string crossval_table(const CrossvalRun& run);
std::string ranking_csv(std::span<const FeatureStat> stats);
std::string ranking_table(std::span<const FeatureStat> stats);

}  // namespace flakelex
