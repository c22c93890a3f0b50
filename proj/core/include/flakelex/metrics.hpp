#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flakelex/corpus.hpp"
#include "flakelex/featurize.hpp"
#include "flakelex/learn.hpp"

namespace flakelex {

// Positive class is Flaky.
struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion(std::span<const Label> predictions,
                          std::span<const Label> truth);

// Zero-denominator cases yield {0, false}.
struct MetricValue {
    double value = 0.0;
    bool defined = true;
};

MetricValue precision(const ConfusionMatrix& cm);
MetricValue recall(const ConfusionMatrix& cm);
MetricValue f1(const ConfusionMatrix& cm);
MetricValue mcc(const ConfusionMatrix& cm);

// Rank-based (Mann-Whitney) AUC; ties count one half. Throws SingleClassAUC
// unless both classes appear in `truth`.
double auc(std::span<const double> scores, std::span<const Label> truth);

struct EvalReport {
    ClassifierKind classifier = ClassifierKind::RandomForest;
    ConfusionMatrix cm;
    MetricValue precision;
    MetricValue recall;
    MetricValue f1;
    MetricValue mcc;
    std::optional<double> auc;
    std::string dataset;
    std::uint64_t seed = 0;
};

EvalReport evaluate(const TrainedModel& model, const Corpus& test,
                    const Vocabulary& vocab, AblationConfig ablation,
                    const std::string& dataset_tag);

struct RecallOnlyReport {
    double recall = 0.0;
    std::int64_t tp = 0;
    std::int64_t fn = 0;
};

// For corpora containing only flaky cases; throws NonFlakyPresent otherwise.
RecallOnlyReport recall_only_evaluate(const TrainedModel& model,
                                      const Corpus& flaky_only,
                                      const Vocabulary& vocab,
                                      AblationConfig ablation);

}  // namespace flakelex
