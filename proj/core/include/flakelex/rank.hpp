#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flakelex/corpus.hpp"
#include "flakelex/featurize.hpp"

namespace flakelex {

// One ranked feature: a token, "<keyword>_keyword", or "loc". The frequency
// columns count the tests containing the feature; for loc they do not apply.
struct FeatureStat {
    std::string feature;
    double info_gain = 0.0;  // bits
    bool counts_applicable = true;
    std::int64_t n_tests = 0;
    std::int64_t n_flaky = 0;
    std::int64_t n_nonflaky = 0;
};

// H(label) - H(label | presence), in bits, with 0 log 0 = 0. Throws
// LengthMismatch / SingleClassLabels.
double info_gain(const std::vector<bool>& presence, std::span<const Label> labels);

// Multi-valued variant used for binned features.
double info_gain_discrete(std::span<const std::int32_t> bins,
                          std::span<const Label> labels);

// Vocabulary configuration the ranking runs under. Token and keyword features
// are binarized by presence; loc is discretized into quartile bins. The
// default keeps identifiers whole and unstemmed with the stop list off, which
// is the setup the reference frequency tables correspond to.
struct RankConfig {
    PipelineConfig pipeline{false, true, false, false};
    bool tokens = true;
    bool keywords = true;
    bool loc = true;
};

RankConfig rank_config_for(AblationConfig ablation);

// Ranks all features of the corpus by information gain, descending, ties
// broken lexicographically by feature name; returns the top k (everything if
// k == 0).
std::vector<FeatureStat> rank_features(const Corpus& corpus, const RankConfig& config,
                                       std::size_t k);
std::vector<FeatureStat> rank_features(const Corpus& corpus, AblationConfig ablation,
                                       std::size_t k);

struct RankingOverlap {
    struct SharedFeature {
        std::string feature;
        std::size_t rank_a = 0;  // 1-based
        std::size_t rank_b = 0;
        std::int64_t displacement() const {
            return static_cast<std::int64_t>(rank_a) - static_cast<std::int64_t>(rank_b);
        }
    };
    std::size_t overlap = 0;
    std::vector<SharedFeature> shared;
    std::vector<std::string> only_a;
    std::vector<std::string> only_b;
};

// Top-k set intersection and per-feature rank displacement.
RankingOverlap compare_rankings(std::span<const FeatureStat> a,
                                std::span<const FeatureStat> b, std::size_t k);

}  // namespace flakelex
