#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flakelex/corpus.hpp"
#include "flakelex/featurize.hpp"

namespace flakelex {

enum class ClassifierKind {
    RandomForest,
    DecisionTree,
    NaiveBayes,
    LinearSVM,
    NearestNeighbour,
    LogisticRegression,
    LinearDiscriminant,
    Perceptron,
};

inline constexpr std::size_t kClassifierCount = 8;
const std::array<ClassifierKind, kClassifierCount>& all_classifiers();
std::string_view classifier_name(ClassifierKind kind);  // display name
std::string_view classifier_id(ClassifierKind kind);    // CLI identifier
std::optional<ClassifierKind> parse_classifier(std::string_view id);

// Every knob has a fixed default; training never tunes them.
struct Hyperparameters {
    // random forest: bootstrap sampling, unlimited depth, Gini impurity,
    // floor(log2 F) + 1 candidate features per split
    std::int32_t forest_trees = 100;

    // Gaussian naive Bayes
    double nb_variance_floor = 1e-9;

    // linear SVM, L2-regularized hinge loss, dual coordinate descent
    double svm_cost = 1.0;
    std::int32_t svm_max_epochs = 5000;
    double svm_tolerance = 1e-4;

    // nearest neighbour, Euclidean distance, ties to the lowest index
    std::int32_t knn_neighbors = 1;

    // logistic regression, L2 penalty, gradient descent with backtracking
    double lr_cost = 1.0;
    double lr_tolerance = 1e-6;
    std::int32_t lr_max_iterations = 1000;

    // linear discriminant: pooled covariance with a diagonal ridge, solved
    // iteratively; required because width usually dwarfs the sample count
    double lda_ridge = 1e-4;

    // perceptron, online updates with a seeded per-epoch shuffle
    double perceptron_rate = 1.0;
    std::int32_t perceptron_max_epochs = 1000;

    friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::RandomForest;
    std::uint64_t seed = 42;
    Hyperparameters hyper;
};

struct Prediction {
    Label label = Label::NonFlaky;
    double score = 0.0;  // higher means more flaky
};

struct TrainingInfo {
    double duration_ms = 0.0;
    std::int64_t iterations = 0;  // epochs / solver iterations, 0 if not iterative
    bool converged = true;        // false when the iteration cap stopped training
};

namespace detail {
struct ModelParams;
}

// Immutable after training. Score semantics by kind: forest/tree/bayes/
// logistic are probability-like in [0,1] (threshold 0.5), svm/perceptron/
// discriminant are signed margins (threshold 0), nearest-neighbour is the
// flaky fraction among the k neighbours.
class TrainedModel {
public:
    TrainedModel(TrainedModel&&) noexcept;
    TrainedModel& operator=(TrainedModel&&) noexcept;
    TrainedModel(const TrainedModel&);
    TrainedModel& operator=(const TrainedModel&);
    ~TrainedModel();

    const ClassifierSpec& spec() const;
    std::size_t width() const;
    std::uint64_t fingerprint() const;  // vocabulary fingerprint, 0 if unbound
    double threshold() const;
    double prior_flaky() const;
    const TrainingInfo& training_info() const;

    double score(const SparseRow& row, std::size_t row_width) const;
    Prediction predict(const SparseRow& row, std::size_t row_width) const;
    std::vector<double> score_batch(const FeatureMatrix& matrix) const;
    std::vector<Prediction> predict_batch(const FeatureMatrix& matrix) const;

    void save(const std::filesystem::path& path,
              const Vocabulary* vocab = nullptr) const;

    struct Loaded;
    static Loaded load(const std::filesystem::path& path);

private:
    friend TrainedModel train(const ClassifierSpec&, const FeatureMatrix&,
                              std::span<const Label>);
    TrainedModel();
    std::unique_ptr<detail::ModelParams> params_;
};

struct TrainedModel::Loaded {
    TrainedModel model;
    std::optional<Vocabulary> vocabulary;  // present when the file embeds one
    AblationConfig ablation = AblationConfig::AllFeatures;
};

// Deterministic for fixed (spec, data, seed): rows are reduced to a canonical
// order before any seeded shuffling, so training is invariant under input row
// permutation. Throws SingleClassTraining and DimensionMismatch; hitting an
// iteration cap is recorded, not thrown.
TrainedModel train(const ClassifierSpec& spec, const FeatureMatrix& X,
                   std::span<const Label> y);

}  // namespace flakelex
