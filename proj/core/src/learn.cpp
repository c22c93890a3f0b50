#include "flakelex/learn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "flakelex/error.hpp"
#include "learn_internal.hpp"

namespace flakelex {

using detail::ModelParams;

const std::array<ClassifierKind, kClassifierCount>& all_classifiers() {
    static const std::array<ClassifierKind, kClassifierCount> order = {
        ClassifierKind::RandomForest,   ClassifierKind::DecisionTree,
        ClassifierKind::NaiveBayes,     ClassifierKind::LinearSVM,
        ClassifierKind::NearestNeighbour, ClassifierKind::LogisticRegression,
        ClassifierKind::LinearDiscriminant, ClassifierKind::Perceptron,
    };
    return order;
}

std::string_view classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::RandomForest: return "Random Forest";
        case ClassifierKind::DecisionTree: return "Decision Tree";
        case ClassifierKind::NaiveBayes: return "Naive Bayes";
        case ClassifierKind::LinearSVM: return "SVM";
        case ClassifierKind::NearestNeighbour: return "Nearest Neighbour";
        case ClassifierKind::LogisticRegression: return "LR";
        case ClassifierKind::LinearDiscriminant: return "LDA";
        case ClassifierKind::Perceptron: return "Perceptron";
    }
    return "?";
}

std::string_view classifier_id(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::RandomForest: return "rf";
        case ClassifierKind::DecisionTree: return "dt";
        case ClassifierKind::NaiveBayes: return "nb";
        case ClassifierKind::LinearSVM: return "svm";
        case ClassifierKind::NearestNeighbour: return "knn";
        case ClassifierKind::LogisticRegression: return "lr";
        case ClassifierKind::LinearDiscriminant: return "lda";
        case ClassifierKind::Perceptron: return "perceptron";
    }
    return "?";
}

std::optional<ClassifierKind> parse_classifier(std::string_view id) {
    for (auto kind : all_classifiers())
        if (classifier_id(kind) == id) return kind;
    return std::nullopt;
}

namespace detail {

std::vector<std::size_t> canonical_order(const FeatureMatrix& X,
                                         std::span<const Label> y,
                                         std::uint64_t seed) {
    std::vector<std::size_t> order(X.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (y[a] != y[b]) return y[a] == Label::Flaky;
        return X.rows[a].entries < X.rows[b].entries;
    });
    Rng rng(seed);
    rng.shuffle(order);
    return order;
}

double dot(const SparseRow& row, std::span<const double> w) {
    double s = 0.0;
    for (const auto& [col, val] : row.entries) s += w[col] * val;
    return s;
}

void add_scaled(std::span<double> w, double alpha, const SparseRow& row) {
    for (const auto& [col, val] : row.entries) w[col] += alpha * val;
}

double sparse_dot(const SparseRow& a, const SparseRow& b) {
    double s = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else {
            s += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return s;
}

double squared_norm(const SparseRow& row) {
    double s = 0.0;
    for (const auto& [col, val] : row.entries) s += val * val;
    return s;
}

double gaussian_log_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (std::log(2.0 * 3.141592653589793 * var) + d * d / var);
}

void GaussianNbModel::refresh_baselines() {
    baseline_flaky = 0.0;
    baseline_nonflaky = 0.0;
    for (std::size_t f = 0; f < mean_flaky.size(); ++f) {
        baseline_flaky += gaussian_log_pdf(0.0, mean_flaky[f], var_flaky[f]);
        baseline_nonflaky += gaussian_log_pdf(0.0, mean_nonflaky[f], var_nonflaky[f]);
    }
}

void KnnModel::refresh_norms() {
    norms.clear();
    norms.reserve(rows.size());
    for (const auto& r : rows) norms.push_back(squared_norm(r));
}

}  // namespace detail

// --- TrainedModel ------------------------------------------------------------

TrainedModel::TrainedModel() : params_(std::make_unique<ModelParams>()) {}
TrainedModel::TrainedModel(TrainedModel&&) noexcept = default;
TrainedModel& TrainedModel::operator=(TrainedModel&&) noexcept = default;
TrainedModel::TrainedModel(const TrainedModel& other)
    : params_(std::make_unique<ModelParams>(*other.params_)) {}
TrainedModel& TrainedModel::operator=(const TrainedModel& other) {
    params_ = std::make_unique<ModelParams>(*other.params_);
    return *this;
}
TrainedModel::~TrainedModel() = default;

const ClassifierSpec& TrainedModel::spec() const { return params_->spec; }
std::size_t TrainedModel::width() const { return params_->width; }
std::uint64_t TrainedModel::fingerprint() const { return params_->fingerprint; }
double TrainedModel::threshold() const { return params_->threshold; }
double TrainedModel::prior_flaky() const { return params_->prior_flaky; }
const TrainingInfo& TrainedModel::training_info() const { return params_->info; }

namespace {

double score_row(const ModelParams& p, const SparseRow& row) {
    using namespace detail;
    return std::visit(
        [&](const auto& impl) -> double {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, ForestModel>) {
                // fraction of trees voting flaky
                std::int32_t votes = 0;
                for (const auto& tree : impl.trees)
                    if (tree.score(row) >= 0.5) ++votes;
                return static_cast<double>(votes) /
                       static_cast<double>(impl.trees.size());
            } else if constexpr (std::is_same_v<T, TreeModel>) {
                return impl.score(row);
            } else if constexpr (std::is_same_v<T, GaussianNbModel>) {
                // all-zeros baseline patched at the nonzero coordinates
                double lf = impl.log_prior_flaky + impl.baseline_flaky;
                double ln = impl.log_prior_nonflaky + impl.baseline_nonflaky;
                for (const auto& [col, val] : row.entries) {
                    lf += gaussian_log_pdf(val, impl.mean_flaky[col], impl.var_flaky[col]) -
                          gaussian_log_pdf(0.0, impl.mean_flaky[col], impl.var_flaky[col]);
                    ln += gaussian_log_pdf(val, impl.mean_nonflaky[col], impl.var_nonflaky[col]) -
                          gaussian_log_pdf(0.0, impl.mean_nonflaky[col], impl.var_nonflaky[col]);
                }
                const double m = std::max(lf, ln);
                const double denom = std::exp(lf - m) + std::exp(ln - m);
                return std::exp(lf - m) / denom;
            } else if constexpr (std::is_same_v<T, LinearModel>) {
                const double margin = dot(row, impl.weights) + impl.bias;
                if (!impl.sigmoid) return margin;
                return 1.0 / (1.0 + std::exp(-margin));
            } else {  // KnnModel
                const double rn = squared_norm(row);
                // k best distances, ties keep the earlier training row
                std::vector<std::pair<double, std::size_t>> best;
                for (std::size_t i = 0; i < impl.rows.size(); ++i) {
                    const double d = rn + impl.norms[i] -
                                     2.0 * sparse_dot(row, impl.rows[i]);
                    if (best.size() < static_cast<std::size_t>(impl.k)) {
                        best.emplace_back(d, i);
                        std::sort(best.begin(), best.end());
                    } else if (d < best.back().first) {
                        best.back() = {d, i};
                        std::sort(best.begin(), best.end());
                    }
                }
                std::int32_t flaky = 0;
                for (const auto& [d, i] : best) flaky += impl.flaky[i];
                return static_cast<double>(flaky) /
                       static_cast<double>(best.size());
            }
        },
        p.impl);
}

}  // namespace

double TrainedModel::score(const SparseRow& row, std::size_t row_width) const {
    if (row_width != params_->width)
        throw DimensionMismatch("feature width " + std::to_string(row_width) +
                                " does not match the model width " +
                                std::to_string(params_->width));
    return score_row(*params_, row);
}

Prediction TrainedModel::predict(const SparseRow& row, std::size_t row_width) const {
    const double s = score(row, row_width);
    return Prediction{s >= params_->threshold ? Label::Flaky : Label::NonFlaky, s};
}

std::vector<double> TrainedModel::score_batch(const FeatureMatrix& matrix) const {
    if (matrix.width != params_->width)
        throw DimensionMismatch("feature width " + std::to_string(matrix.width) +
                                " does not match the model width " +
                                std::to_string(params_->width));
    if (matrix.fingerprint != 0 && params_->fingerprint != 0 &&
        matrix.fingerprint != params_->fingerprint)
        throw ConfigMismatch("feature matrix was built against a different vocabulary");
    std::vector<double> scores;
    scores.reserve(matrix.rows.size());
    for (const auto& row : matrix.rows) scores.push_back(score_row(*params_, row));
    return scores;
}

std::vector<Prediction> TrainedModel::predict_batch(const FeatureMatrix& matrix) const {
    std::vector<Prediction> out;
    out.reserve(matrix.rows.size());
    for (double s : score_batch(matrix))
        out.push_back({s >= params_->threshold ? Label::Flaky : Label::NonFlaky, s});
    return out;
}

// --- training dispatch -------------------------------------------------------

TrainedModel train(const ClassifierSpec& spec, const FeatureMatrix& X,
                   std::span<const Label> y) {
    if (X.rows.size() != y.size())
        throw DimensionMismatch("got " + std::to_string(X.rows.size()) +
                                " rows but " + std::to_string(y.size()) + " labels");
    std::size_t n_flaky = 0, n_nonflaky = 0;
    for (auto label : y) {
        if (label == Label::Flaky) ++n_flaky;
        else if (label == Label::NonFlaky) ++n_nonflaky;
        else throw SingleClassTraining("training labels must be flaky or non-flaky");
    }
    if (n_flaky == 0 || n_nonflaky == 0)
        throw SingleClassTraining("training data must contain both classes");

    detail::TrainingView view{X, y, detail::canonical_order(X, y, spec.seed), n_flaky};

    TrainedModel model;
    ModelParams& params = *model.params_;
    params.spec = spec;
    params.width = X.width;
    params.fingerprint = X.fingerprint;
    params.prior_flaky =
        static_cast<double>(n_flaky) / static_cast<double>(y.size());

    const auto start = std::chrono::steady_clock::now();
    switch (spec.kind) {
        case ClassifierKind::RandomForest: detail::train_random_forest(view, params); break;
        case ClassifierKind::DecisionTree: detail::train_decision_tree(view, params); break;
        case ClassifierKind::NaiveBayes: detail::train_naive_bayes(view, params); break;
        case ClassifierKind::LinearSVM: detail::train_linear_svm(view, params); break;
        case ClassifierKind::NearestNeighbour: detail::train_knn(view, params); break;
        case ClassifierKind::LogisticRegression:
            detail::train_logistic_regression(view, params);
            break;
        case ClassifierKind::LinearDiscriminant:
            detail::train_linear_discriminant(view, params);
            break;
        case ClassifierKind::Perceptron: detail::train_perceptron(view, params); break;
    }
    params.info.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  start)
            .count();
    return model;
}

}  // namespace flakelex
