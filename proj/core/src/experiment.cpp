#include "flakelex/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flakelex/error.hpp"

namespace flakelex {

using nlohmann::ordered_json;

std::vector<ClassifierKind> ExperimentConfig::resolved_classifiers() const {
    if (!classifiers.empty()) return classifiers;
    const auto& all = all_classifiers();
    return {all.begin(), all.end()};
}

std::string ExperimentConfig::to_key_values() const {
    std::ostringstream out;
    out << "corpus=" << corpus << '\n';
    out << "validation=" << validation << '\n';
    out << "ablation=" << ablation_id(ablation) << '\n';
    out << "classifiers=";
    const auto kinds = resolved_classifiers();
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (i) out << ',';
        out << classifier_id(kinds[i]);
    }
    out << '\n';
    out << "train_fraction=" << train_fraction << '\n';
    out << "seed=" << seed << '\n';
    out << "out_dir=" << out_dir << '\n';
    return out.str();
}

ExperimentConfig ExperimentConfig::from_key_values(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "corpus") config.corpus = value;
        else if (key == "validation") config.validation = value;
        else if (key == "ablation") {
            auto a = parse_ablation(value);
            if (!a) throw Error("unknown ablation: " + value);
            config.ablation = *a;
        } else if (key == "classifiers") {
            config.classifiers.clear();
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                if (item == "all") {
                    const auto& all = all_classifiers();
                    config.classifiers.assign(all.begin(), all.end());
                    continue;
                }
                auto kind = parse_classifier(item);
                if (!kind) throw Error("unknown classifier: " + item);
                config.classifiers.push_back(*kind);
            }
        } else if (key == "train_fraction") {
            config.train_fraction = std::stod(value);
        } else if (key == "seed") {
            config.seed = std::stoull(value);
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else {
            throw Error("unknown config key: " + key);
        }
    }
    return config;
}

std::filesystem::path resolve_data_path(const std::string& path) {
    std::filesystem::path p(path);
    if (std::filesystem::exists(p)) return p;
    if (const char* root = std::getenv("FLAKELEX_DATA_DIR")) {
        auto candidate = std::filesystem::path(root) / p;
        if (std::filesystem::exists(candidate)) return candidate;
    }
    return p;
}

TrainEvalRun run_train_eval(const ExperimentConfig& config, const Corpus& corpus) {
    require_training_corpus(corpus);
    auto split = stratified_split(corpus, config.train_fraction, config.seed);

    auto vocabulary = Vocabulary::build(split.train, config.ablation);
    const auto matrix = vectorize_corpus(split.train, vocabulary, config.ablation);
    std::vector<Label> labels;
    labels.reserve(split.train.size());
    for (const auto& c : split.train.cases) labels.push_back(c.label);

    TrainEvalRun run{{}, std::move(vocabulary), {}};
    const std::string tag = corpus.origin + "#held-out";
    for (auto kind : config.resolved_classifiers()) {
        ClassifierSpec spec{kind, config.seed, {}};
        auto model = train(spec, matrix, labels);
        run.reports.push_back(
            evaluate(model, split.test, run.vocabulary, config.ablation, tag));
        run.models.push_back(std::move(model));
    }
    return run;
}

AblateRun run_ablate(const ExperimentConfig& config, const Corpus& corpus) {
    AblateRun run;
    run.classifiers = config.classifiers.empty()
                          ? std::vector<ClassifierKind>{ClassifierKind::RandomForest,
                                                        ClassifierKind::LinearSVM}
                          : config.classifiers;
    run.reports.resize(run.classifiers.size());

    for (auto ablation : all_ablations()) {
        ExperimentConfig cell = config;
        cell.ablation = ablation;
        cell.classifiers = run.classifiers;
        auto result = run_train_eval(cell, corpus);
        for (std::size_t c = 0; c < run.classifiers.size(); ++c)
            run.reports[c].push_back(std::move(result.reports[c]));
    }
    return run;
}

CrossvalRun run_crossval(const ExperimentConfig& config, const Corpus& train_corpus,
                         const Corpus& validation, FilterMode mode) {
    require_training_corpus(train_corpus);
    for (const auto& c : validation.cases)
        if (c.label != Label::Flaky)
            throw NonFlakyPresent("validation case \"" + c.qualified_name +
                                  "\" is not labeled flaky");

    auto filtered = project_filter(dedupe(validation).corpus, train_corpus, mode);

    auto vocabulary = Vocabulary::build(train_corpus, config.ablation);
    const auto matrix = vectorize_corpus(train_corpus, vocabulary, config.ablation);
    std::vector<Label> labels;
    labels.reserve(train_corpus.size());
    for (const auto& c : train_corpus.cases) labels.push_back(c.label);

    CrossvalRun run;
    run.mode = mode;
    run.validation_cases = filtered.corpus.size();
    run.validation_projects = filtered.projects_retained;
    run.dropped_duplicates = filtered.dropped_duplicates;

    for (auto kind : config.resolved_classifiers()) {
        ClassifierSpec spec{kind, config.seed, {}};
        auto model = train(spec, matrix, labels);
        run.rows.push_back(
            {kind, recall_only_evaluate(model, filtered.corpus, vocabulary,
                                        config.ablation)});
    }
    std::stable_sort(run.rows.begin(), run.rows.end(),
                     [](const CrossvalRow& a, const CrossvalRow& b) {
                         return a.report.recall > b.report.recall;
                     });

    // the ranking needs both classes, so it runs over the union corpus
    Corpus combined = train_corpus;
    combined.origin += "+validation";
    for (const auto& c : filtered.corpus.cases) combined.cases.push_back(c);
    run.ranking = rank_features(combined, RankConfig{}, 20);
    return run;
}

// --- renderers ----------------------------------------------------------------

namespace {

std::string fixed4(const MetricValue& v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v.defined ? v.value : 0.0);
    return buf;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

constexpr std::string_view kMetricHeader = "Precision,Recall,F1,MCC,AUC";

std::string metric_cells(const EvalReport& r) {
    std::string out = fixed4(r.precision);
    out += ',' + fixed4(r.recall);
    out += ',' + fixed4(r.f1);
    out += ',' + fixed4(r.mcc);
    out += ',' + (r.auc ? fixed4(*r.auc) : std::string("-"));
    return out;
}

}  // namespace

std::string reports_csv(std::span<const EvalReport> reports) {
    std::string out = "Classifier,";
    out += kMetricHeader;
    out += ",TP,FP,FN,TN,Seed,Dataset\n";
    for (const auto& r : reports) {
        out += std::string(classifier_name(r.classifier)) + ',' + metric_cells(r);
        out += ',' + std::to_string(r.cm.tp) + ',' + std::to_string(r.cm.fp);
        out += ',' + std::to_string(r.cm.fn) + ',' + std::to_string(r.cm.tn);
        out += ',' + std::to_string(r.seed) + ',' + r.dataset + '\n';
    }
    return out;
}

std::string reports_table(std::span<const EvalReport> reports) {
    std::string out = pad("Classifier", 20) + pad("Precision", 11) + pad("Recall", 11) +
                      pad("F1", 11) + pad("MCC", 11) + pad("AUC", 11) + '\n';
    for (const auto& r : reports) {
        out += pad(std::string(classifier_name(r.classifier)), 20);
        out += pad(fixed2(r.precision.value), 11) + pad(fixed2(r.recall.value), 11);
        out += pad(fixed2(r.f1.value), 11) + pad(fixed2(r.mcc.value), 11);
        out += pad(r.auc ? fixed2(*r.auc) : "-", 11) + '\n';
    }
    return out;
}

std::string report_json(const EvalReport& r) {
    ordered_json j;
    j["classifier"] = classifier_id(r.classifier);
    j["precision"] = r.precision.defined ? ordered_json(r.precision.value)
                                         : ordered_json(nullptr);
    j["recall"] = r.recall.defined ? ordered_json(r.recall.value) : ordered_json(nullptr);
    j["f1"] = r.f1.defined ? ordered_json(r.f1.value) : ordered_json(nullptr);
    j["mcc"] = r.mcc.defined ? ordered_json(r.mcc.value) : ordered_json(nullptr);
    j["auc"] = r.auc ? ordered_json(*r.auc) : ordered_json(nullptr);
    j["tp"] = r.cm.tp;
    j["fp"] = r.cm.fp;
    j["fn"] = r.cm.fn;
    j["tn"] = r.cm.tn;
    j["seed"] = r.seed;
    j["dataset"] = r.dataset;
    return j.dump(2) + "\n";
}

std::string ablate_csv(const AblateRun& run) {
    std::string out = "Classifier,Features,";
    out += kMetricHeader;
    out += '\n';
    for (std::size_t c = 0; c < run.classifiers.size(); ++c) {
        for (std::size_t a = 0; a < run.reports[c].size(); ++a) {
            out += std::string(classifier_name(run.classifiers[c])) + ',';
            out += std::string(ablation_name(all_ablations()[a])) + ',';
            out += metric_cells(run.reports[c][a]) + '\n';
        }
    }
    return out;
}

std::string ablate_table(const AblateRun& run) {
    std::string out;
    for (std::size_t c = 0; c < run.classifiers.size(); ++c) {
        out += "=== ";
        out += classifier_name(run.classifiers[c]);
        out += " ===\n";
        out += pad("Features", 22) + pad("Precision", 11) + pad("Recall", 11) +
               pad("F1", 11) + pad("MCC", 11) + pad("AUC", 11) + '\n';
        for (std::size_t a = 0; a < run.reports[c].size(); ++a) {
            const auto& r = run.reports[c][a];
            out += pad(std::string(ablation_name(all_ablations()[a])), 22);
            out += pad(fixed2(r.precision.value), 11) + pad(fixed2(r.recall.value), 11);
            out += pad(fixed2(r.f1.value), 11) + pad(fixed2(r.mcc.value), 11);
            out += pad(r.auc ? fixed2(*r.auc) : "-", 11) + '\n';
        }
        out += '\n';
    }
    return out;
}

std::string crossval_csv(const CrossvalRun& run) {
    std::string out = "Classifier,Recall,TP,FN\n";
    for (const auto& row : run.rows) {
        out += std::string(classifier_name(row.classifier)) + ',';
        out += fixed4(row.report.recall) + ',' + std::to_string(row.report.tp) +
               ',' + std::to_string(row.report.fn) + '\n';
    }
    return out;
}

std::string crossval_table(const CrossvalRun& run) {
    std::string out = std::string(run.mode == FilterMode::Intra ? "intra" : "inter");
    out += "-project validation: " + std::to_string(run.validation_cases) +
           " tests from " + std::to_string(run.validation_projects) + " projects";
    if (run.dropped_duplicates)
        out += " (" + std::to_string(run.dropped_duplicates) + " duplicates dropped)";
    out += '\n';
    out += pad("Classifier", 20) + pad("Recall", 9) + pad("TP", 6) + pad("FN", 6) + '\n';
    for (const auto& row : run.rows) {
        out += pad(std::string(classifier_name(row.classifier)), 20);
        out += pad(fixed2(row.report.recall), 9);
        out += pad(std::to_string(row.report.tp), 6);
        out += pad(std::to_string(row.report.fn), 6) + '\n';
    }
    return out;
}

std::string ranking_csv(std::span<const FeatureStat> stats) {
    std::string out = "feature,info_gain,tests,flaky,nonflaky\n";
    for (const auto& s : stats) {
        out += s.feature + ',' + fixed4(s.info_gain) + ',';
        if (s.counts_applicable) {
            out += std::to_string(s.n_tests) + ',' + std::to_string(s.n_flaky) + ',' +
                   std::to_string(s.n_nonflaky);
        } else {
            out += "-,-,-";
        }
        out += '\n';
    }
    return out;
}

std::string ranking_table(std::span<const FeatureStat> stats) {
    std::string out = pad("Feature", 28) + pad("Inf. Gain", 11) + pad("Tests", 8) +
                      pad("Flaky", 8) + pad("Non-Flaky", 10) + '\n';
    for (const auto& s : stats) {
        out += pad(s.feature, 28) + pad(fixed4(s.info_gain), 11);
        if (s.counts_applicable) {
            out += pad(std::to_string(s.n_tests), 8) + pad(std::to_string(s.n_flaky), 8) +
                   pad(std::to_string(s.n_nonflaky), 10);
        } else {
            out += pad("-", 8) + pad("-", 8) + pad("-", 10);
        }
        out += '\n';
    }
    return out;
}

}  // namespace flakelex
