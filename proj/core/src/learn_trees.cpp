#include <algorithm>
#include <cmath>

#include "learn_internal.hpp"

namespace flakelex::detail {
namespace {

// Column-major view of the training rows: per column, (position, value) for
// every nonzero, positions being 0..n-1 in canonical order. Shared by all
// trees of a forest.
struct ColumnIndex {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> columns;

    ColumnIndex(const TrainingView& view, std::size_t width) : columns(width) {
        for (std::uint32_t pos = 0; pos < view.size(); ++pos)
            for (const auto& [col, val] : view.row(pos).entries)
                columns[col].emplace_back(pos, val);
    }
};

struct ValueGroup {
    double value = 0.0;
    std::int64_t weight = 0;
    std::int64_t flaky = 0;
};

class TreeBuilder {
public:
    TreeBuilder(const TrainingView& view, const ColumnIndex& index,
                std::vector<std::int32_t> weights, Rng* feature_rng,
                std::size_t candidates_per_split)
        : view_(view),
          index_(index),
          weights_(std::move(weights)),
          rng_(feature_rng),
          candidates_(candidates_per_split),
          stamp_of_(view.size(), 0) {}

    TreeModel build() {
        std::vector<std::uint32_t> rows;
        for (std::uint32_t pos = 0; pos < view_.size(); ++pos)
            if (weights_[pos] > 0) rows.push_back(pos);
        TreeModel tree;
        grow(tree, rows);
        return tree;
    }

private:
    const TrainingView& view_;
    const ColumnIndex& index_;
    std::vector<std::int32_t> weights_;
    Rng* rng_;  // null: consider every feature (plain CART)
    std::size_t candidates_;
    std::vector<std::uint32_t> stamp_of_;
    std::uint32_t stamp_ = 0;

    std::int32_t grow(TreeModel& tree, const std::vector<std::uint32_t>& rows) {
        std::int64_t total = 0, flaky = 0;
        for (auto pos : rows) {
            total += weights_[pos];
            if (view_.is_flaky(pos)) flaky += weights_[pos];
        }
        const double value =
            static_cast<double>(flaky) / static_cast<double>(total);

        const auto node_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, value});
        if (flaky == 0 || flaky == total || rows.size() < 2 || total < 2)
            return node_id;

        const auto [feature, threshold] = find_split(rows, total, flaky);
        if (feature < 0) return node_id;

        std::vector<std::uint32_t> left, right;
        for (auto pos : rows) {
            const double v = view_.row(pos).at(static_cast<std::uint32_t>(feature));
            (v <= threshold ? left : right).push_back(pos);
        }
        if (left.empty() || right.empty()) return node_id;  // degenerate threshold

        tree.nodes[node_id].feature = feature;
        tree.nodes[node_id].threshold = threshold;
        const auto l = grow(tree, left);
        tree.nodes[node_id].left = l;
        const auto r = grow(tree, right);
        tree.nodes[node_id].right = r;
        return node_id;
    }

    std::vector<std::uint32_t> pick_candidates() {
        const auto width = static_cast<std::uint32_t>(index_.columns.size());
        if (!rng_ || candidates_ >= width) {
            std::vector<std::uint32_t> all(width);
            for (std::uint32_t i = 0; i < width; ++i) all[i] = i;
            return all;
        }
        // Floyd's sampling without replacement, then ascending order so that
        // impurity ties resolve to the lowest feature index
        std::vector<std::uint32_t> chosen;
        chosen.reserve(candidates_);
        for (std::uint32_t j = width - static_cast<std::uint32_t>(candidates_);
             j < width; ++j) {
            const auto t = static_cast<std::uint32_t>(rng_->bounded(j + 1));
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
                chosen.push_back(t);
            else
                chosen.push_back(j);
        }
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

    // Returns (feature, threshold) minimizing weighted Gini impurity, or
    // (-1, 0) when no candidate feature separates the node.
    std::pair<std::int32_t, double> find_split(const std::vector<std::uint32_t>& rows,
                                               std::int64_t total, std::int64_t flaky) {
        ++stamp_;
        for (auto pos : rows) stamp_of_[pos] = stamp_;

        auto gini = [](std::int64_t f, std::int64_t t) {
            const double p = static_cast<double>(f) / static_cast<double>(t);
            return 1.0 - p * p - (1.0 - p) * (1.0 - p);
        };

        std::int32_t best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = gini(flaky, total);

        std::vector<ValueGroup> groups;
        for (auto feature : pick_candidates()) {
            groups.clear();
            std::int64_t seen_weight = 0, seen_flaky = 0;
            for (const auto& [pos, val] : index_.columns[feature]) {
                if (stamp_of_[pos] != stamp_) continue;
                groups.push_back({val, weights_[pos],
                                  view_.is_flaky(pos) ? weights_[pos] : 0});
                seen_weight += weights_[pos];
                seen_flaky += view_.is_flaky(pos) ? weights_[pos] : 0;
            }
            if (groups.empty()) continue;  // constant zero on this node

            std::sort(groups.begin(), groups.end(),
                      [](const ValueGroup& a, const ValueGroup& b) {
                          return a.value < b.value;
                      });
            // merge equal values and splice in the implicit zeros
            std::vector<ValueGroup> merged;
            bool zeros_placed = seen_weight == total;
            auto place_zeros = [&] {
                merged.push_back({0.0, total - seen_weight, flaky - seen_flaky});
                zeros_placed = true;
            };
            for (const auto& g : groups) {
                if (!zeros_placed && g.value > 0.0) place_zeros();
                if (!merged.empty() && merged.back().value == g.value) {
                    merged.back().weight += g.weight;
                    merged.back().flaky += g.flaky;
                } else {
                    merged.push_back(g);
                }
            }
            if (!zeros_placed) place_zeros();
            if (merged.size() < 2) continue;

            std::int64_t left_weight = 0, left_flaky = 0;
            for (std::size_t g = 0; g + 1 < merged.size(); ++g) {
                left_weight += merged[g].weight;
                left_flaky += merged[g].flaky;
                const double threshold =
                    0.5 * (merged[g].value + merged[g + 1].value);
                if (threshold >= merged[g + 1].value) continue;  // rounding guard
                const std::int64_t right_weight = total - left_weight;
                const std::int64_t right_flaky = flaky - left_flaky;
                const double impurity =
                    (static_cast<double>(left_weight) * gini(left_flaky, left_weight) +
                     static_cast<double>(right_weight) * gini(right_flaky, right_weight)) /
                    static_cast<double>(total);
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = static_cast<std::int32_t>(feature);
                    best_threshold = threshold;
                }
            }
        }
        return {best_feature, best_threshold};
    }
};

std::size_t forest_candidates(std::size_t width) {
    std::size_t m = 1;
    while ((width >>= 1) != 0) ++m;  // floor(log2) + 1
    return m;
}

}  // namespace

void train_decision_tree(const TrainingView& view, ModelParams& params) {
    ColumnIndex index(view, params.width);
    TreeBuilder builder(view, index,
                        std::vector<std::int32_t>(view.size(), 1), nullptr, 0);
    params.impl = builder.build();
    params.threshold = 0.5;
}

void train_random_forest(const TrainingView& view, ModelParams& params) {
    ColumnIndex index(view, params.width);
    const auto n = view.size();
    const auto m = std::max<std::size_t>(1, forest_candidates(params.width));

    ForestModel forest;
    forest.trees.resize(static_cast<std::size_t>(params.spec.hyper.forest_trees));
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        Rng rng(params.spec.seed + t);
        std::vector<std::int32_t> weights(n, 0);
        for (std::size_t i = 0; i < n; ++i) ++weights[rng.bounded(n)];
        TreeBuilder builder(view, index, std::move(weights), &rng, m);
        forest.trees[t] = builder.build();
    }
    params.impl = std::move(forest);
    params.threshold = 0.5;
}

}  // namespace flakelex::detail
