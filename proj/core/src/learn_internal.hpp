#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "flakelex/featurize.hpp"
#include "flakelex/learn.hpp"

namespace flakelex::detail {

// Deterministic RNG wrapper. Bounded draws use the multiply-shift reduction
// so results do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::size_t bounded(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[bounded(i)]);
    }

private:
    std::mt19937_64 engine_;
};

// Training rows are consumed through this order: a stable sort on
// (label, row content) followed by a seeded shuffle. Any permutation of the
// input rows therefore trains to bit-identical parameters.
std::vector<std::size_t> canonical_order(const FeatureMatrix& X,
                                         std::span<const Label> y,
                                         std::uint64_t seed);

double dot(const SparseRow& row, std::span<const double> w);
void add_scaled(std::span<double> w, double alpha, const SparseRow& row);
double sparse_dot(const SparseRow& a, const SparseRow& b);
double squared_norm(const SparseRow& row);

// --- per-kind parameter blocks ----------------------------------------------

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // flaky fraction at the leaf
};

struct TreeModel {
    std::vector<TreeNode> nodes;

    double score(const SparseRow& row) const {
        std::int32_t i = 0;
        while (nodes[i].feature >= 0) {
            i = row.at(static_cast<std::uint32_t>(nodes[i].feature)) <=
                        nodes[i].threshold
                    ? nodes[i].left
                    : nodes[i].right;
        }
        return nodes[i].value;
    }
};

struct ForestModel {
    std::vector<TreeModel> trees;
};

struct GaussianNbModel {
    double log_prior_flaky = 0.0;
    double log_prior_nonflaky = 0.0;
    std::vector<double> mean_flaky, var_flaky;
    std::vector<double> mean_nonflaky, var_nonflaky;

    // log-density of an all-zeros row per class; derived, not serialized
    double baseline_flaky = 0.0;
    double baseline_nonflaky = 0.0;
    void refresh_baselines();
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    bool sigmoid = false;  // squash the margin into a probability
};

struct KnnModel {
    std::int32_t k = 1;
    std::vector<SparseRow> rows;      // canonical order; ties resolve to the lowest index
    std::vector<std::uint8_t> flaky;  // parallel to rows

    std::vector<double> norms;  // derived, not serialized
    void refresh_norms();
};

double gaussian_log_pdf(double x, double mean, double var);

struct ModelParams {
    ClassifierSpec spec;
    std::size_t width = 0;
    std::uint64_t fingerprint = 0;
    double threshold = 0.5;
    double prior_flaky = 0.0;
    TrainingInfo info;
    std::variant<ForestModel, TreeModel, GaussianNbModel, LinearModel, KnnModel> impl;
};

// Inputs to the per-kind trainers, already validated and canonically ordered.
struct TrainingView {
    const FeatureMatrix& X;
    std::span<const Label> y;
    std::vector<std::size_t> order;
    std::size_t n_flaky = 0;

    std::size_t size() const { return order.size(); }
    const SparseRow& row(std::size_t i) const { return X.rows[order[i]]; }
    bool is_flaky(std::size_t i) const { return y[order[i]] == Label::Flaky; }
};

void train_decision_tree(const TrainingView& view, ModelParams& params);
void train_random_forest(const TrainingView& view, ModelParams& params);
void train_naive_bayes(const TrainingView& view, ModelParams& params);
void train_knn(const TrainingView& view, ModelParams& params);
void train_logistic_regression(const TrainingView& view, ModelParams& params);
void train_linear_svm(const TrainingView& view, ModelParams& params);
void train_perceptron(const TrainingView& view, ModelParams& params);
void train_linear_discriminant(const TrainingView& view, ModelParams& params);

}  // namespace flakelex::detail
