#include "flakelex/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "flakelex/error.hpp"

namespace flakelex {

ConfusionMatrix confusion(std::span<const Label> predictions,
                          std::span<const Label> truth) {
    if (predictions.size() != truth.size() || predictions.empty())
        throw LengthMismatch("predictions and truth must be equal-length and non-empty");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool predicted = predictions[i] == Label::Flaky;
        const bool actual = truth[i] == Label::Flaky;
        if (predicted && actual) ++cm.tp;
        else if (predicted && !actual) ++cm.fp;
        else if (!predicted && actual) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

MetricValue precision(const ConfusionMatrix& cm) {
    const auto denom = cm.tp + cm.fp;
    if (denom == 0) return {0.0, false};
    return {static_cast<double>(cm.tp) / static_cast<double>(denom), true};
}

MetricValue recall(const ConfusionMatrix& cm) {
    const auto denom = cm.tp + cm.fn;
    if (denom == 0) return {0.0, false};
    return {static_cast<double>(cm.tp) / static_cast<double>(denom), true};
}

MetricValue f1(const ConfusionMatrix& cm) {
    const auto p = precision(cm);
    const auto r = recall(cm);
    if (!p.defined || !r.defined || p.value + r.value == 0.0) return {0.0, false};
    return {2.0 * p.value * r.value / (p.value + r.value), true};
}

MetricValue mcc(const ConfusionMatrix& cm) {
    const double tp = static_cast<double>(cm.tp);
    const double fp = static_cast<double>(cm.fp);
    const double fn = static_cast<double>(cm.fn);
    const double tn = static_cast<double>(cm.tn);
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0) return {0.0, false};
    return {(tp * tn - fp * fn) / std::sqrt(denom), true};
}

double auc(std::span<const double> scores, std::span<const Label> truth) {
    if (scores.size() != truth.size() || scores.empty())
        throw LengthMismatch("scores and truth must be equal-length and non-empty");
    std::size_t n_pos = 0, n_neg = 0;
    for (auto label : truth) {
        if (label == Label::Flaky) ++n_pos;
        else if (label == Label::NonFlaky) ++n_neg;
        else throw SingleClassAUC("labels must be flaky or non-flaky");
    }
    if (n_pos == 0 || n_neg == 0)
        throw SingleClassAUC("both classes are required to compute AUC");

    // Mann-Whitney statistic via midranks
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k)
            if (truth[order[k]] == Label::Flaky) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double n1 = static_cast<double>(n_pos);
    const double u = rank_sum_pos - n1 * (n1 + 1.0) / 2.0;
    return u / (n1 * static_cast<double>(n_neg));
}

EvalReport evaluate(const TrainedModel& model, const Corpus& test,
                    const Vocabulary& vocab, AblationConfig ablation,
                    const std::string& dataset_tag) {
    if (!test.has_both_classes())
        throw Error("evaluation corpus must contain both labels");
    const auto matrix = vectorize_corpus(test, vocab, ablation);
    const auto scores = model.score_batch(matrix);

    std::vector<Label> predictions(scores.size());
    std::vector<Label> truth(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        predictions[i] =
            scores[i] >= model.threshold() ? Label::Flaky : Label::NonFlaky;
        truth[i] = test.cases[i].label;
    }

    EvalReport report;
    report.classifier = model.spec().kind;
    report.cm = confusion(predictions, truth);
    report.precision = precision(report.cm);
    report.recall = recall(report.cm);
    report.f1 = f1(report.cm);
    report.mcc = mcc(report.cm);
    report.auc = auc(scores, truth);
    report.dataset = dataset_tag;
    report.seed = model.spec().seed;
    return report;
}

RecallOnlyReport recall_only_evaluate(const TrainedModel& model,
                                      const Corpus& flaky_only,
                                      const Vocabulary& vocab,
                                      AblationConfig ablation) {
    for (const auto& c : flaky_only.cases)
        if (c.label != Label::Flaky)
            throw NonFlakyPresent("case \"" + c.qualified_name +
                                  "\" is not labeled flaky");
    const auto matrix = vectorize_corpus(flaky_only, vocab, ablation);
    const auto predictions = model.predict_batch(matrix);

    RecallOnlyReport report;
    for (const auto& p : predictions) {
        if (p.label == Label::Flaky) ++report.tp;
        else ++report.fn;
    }
    const auto total = report.tp + report.fn;
    report.recall = total == 0
                        ? 0.0
                        : static_cast<double>(report.tp) / static_cast<double>(total);
    return report;
}

}  // namespace flakelex
