#include "flakelex/rank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "flakelex/error.hpp"

namespace flakelex {

namespace {

double entropy_bits(std::span<const std::int64_t> counts, std::int64_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

void require_both_classes(std::span<const Label> labels) {
    std::int64_t flaky = 0, nonflaky = 0;
    for (auto l : labels) {
        if (l == Label::Flaky) ++flaky;
        else if (l == Label::NonFlaky) ++nonflaky;
        else throw SingleClassLabels("labels must be flaky or non-flaky");
    }
    if (flaky == 0 || nonflaky == 0)
        throw SingleClassLabels("both classes are required for information gain");
}

}  // namespace

double info_gain_discrete(std::span<const std::int32_t> bins,
                          std::span<const Label> labels) {
    if (bins.size() != labels.size() || bins.empty())
        throw LengthMismatch("bins and labels must be equal-length and non-empty");
    require_both_classes(labels);

    const auto n = static_cast<std::int64_t>(labels.size());
    std::int64_t class_counts[2] = {0, 0};
    std::map<std::int32_t, std::array<std::int64_t, 2>> table;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int c = labels[i] == Label::Flaky ? 0 : 1;
        ++class_counts[c];
        ++table[bins[i]][c];
    }

    const double h_label = entropy_bits(class_counts, n);
    double h_cond = 0.0;
    for (const auto& [bin, counts] : table) {
        const auto bin_total = counts[0] + counts[1];
        h_cond += static_cast<double>(bin_total) / static_cast<double>(n) *
                  entropy_bits(counts, bin_total);
    }
    const double gain = h_label - h_cond;
    return gain < 0.0 ? 0.0 : gain;  // clamp the tiny negative rounding residue
}

double info_gain(const std::vector<bool>& presence, std::span<const Label> labels) {
    if (presence.size() != labels.size() || presence.empty())
        throw LengthMismatch("presence and labels must be equal-length and non-empty");
    std::vector<std::int32_t> bins(presence.size());
    for (std::size_t i = 0; i < presence.size(); ++i) bins[i] = presence[i] ? 1 : 0;
    return info_gain_discrete(bins, labels);
}

RankConfig rank_config_for(AblationConfig ablation) {
    const auto spec = apply_ablation(ablation);
    RankConfig config;
    config.pipeline = spec.pipeline;
    config.tokens = spec.mask.tokens;
    config.keywords = spec.mask.keywords;
    config.loc = spec.mask.loc;
    return config;
}

namespace {

struct PresenceCounts {
    std::int64_t flaky = 0;
    std::int64_t nonflaky = 0;
    std::int64_t total() const { return flaky + nonflaky; }
};

// gain of a presence/absence feature from its 2x2 contingency table
double presence_gain(const PresenceCounts& present, std::int64_t n_flaky,
                     std::int64_t n_nonflaky) {
    const std::int64_t n = n_flaky + n_nonflaky;
    const std::int64_t class_counts[2] = {n_flaky, n_nonflaky};
    const double h_label = entropy_bits(class_counts, n);

    const std::int64_t present_counts[2] = {present.flaky, present.nonflaky};
    const std::int64_t absent_counts[2] = {n_flaky - present.flaky,
                                           n_nonflaky - present.nonflaky};
    const auto n_present = present_counts[0] + present_counts[1];
    const auto n_absent = absent_counts[0] + absent_counts[1];

    double h_cond = 0.0;
    if (n_present > 0)
        h_cond += static_cast<double>(n_present) / static_cast<double>(n) *
                  entropy_bits(present_counts, n_present);
    if (n_absent > 0)
        h_cond += static_cast<double>(n_absent) / static_cast<double>(n) *
                  entropy_bits(absent_counts, n_absent);
    const double gain = h_label - h_cond;
    return gain < 0.0 ? 0.0 : gain;
}

}  // namespace

std::vector<FeatureStat> rank_features(const Corpus& corpus, const RankConfig& config,
                                       std::size_t k) {
    std::vector<Label> labels;
    labels.reserve(corpus.size());
    for (const auto& c : corpus.cases) labels.push_back(c.label);
    require_both_classes(labels);

    std::int64_t n_flaky = 0, n_nonflaky = 0;
    for (auto l : labels) (l == Label::Flaky ? n_flaky : n_nonflaky)++;

    std::vector<FeatureStat> stats;

    if (config.tokens) {
        std::unordered_map<std::string, PresenceCounts> token_presence;
        for (const auto& c : corpus.cases) {
            std::set<std::string> distinct;
            for (auto& t : run_pipeline(config.pipeline, c.body))
                distinct.insert(std::move(t));
            for (const auto& t : distinct) {
                auto& entry = token_presence[t];
                if (c.label == Label::Flaky) ++entry.flaky;
                else ++entry.nonflaky;
            }
        }
        stats.reserve(token_presence.size() + kJavaKeywordCount + 1);
        for (const auto& [token, counts] : token_presence) {
            stats.push_back(FeatureStat{token,
                                        presence_gain(counts, n_flaky, n_nonflaky), true,
                                        counts.total(), counts.flaky, counts.nonflaky});
        }
    }

    if (config.keywords) {
        std::array<PresenceCounts, kJavaKeywordCount> keyword_presence{};
        for (const auto& c : corpus.cases) {
            const auto kw = count_java_keywords(c.body);
            for (std::size_t i = 0; i < kJavaKeywordCount; ++i) {
                if (kw.counts[i] == 0) continue;
                if (c.label == Label::Flaky) ++keyword_presence[i].flaky;
                else ++keyword_presence[i].nonflaky;
            }
        }
        for (std::size_t i = 0; i < kJavaKeywordCount; ++i) {
            const auto& counts = keyword_presence[i];
            stats.push_back(FeatureStat{
                std::string(java_keywords()[i]) + "_keyword",
                presence_gain(counts, n_flaky, n_nonflaky), true, counts.total(),
                counts.flaky, counts.nonflaky});
        }
    }

    if (config.loc) {
        std::vector<std::int32_t> loc_values;
        loc_values.reserve(corpus.size());
        for (const auto& c : corpus.cases) loc_values.push_back(measure_loc(c.body));

        // quartile cut points by nearest rank; values <= cut fall in the bin
        auto sorted = loc_values;
        std::sort(sorted.begin(), sorted.end());
        auto quartile = [&](double q) {
            const auto rank = static_cast<std::size_t>(
                std::ceil(q * static_cast<double>(sorted.size())));
            return sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
        };
        const std::int32_t q1 = quartile(0.25), q2 = quartile(0.5), q3 = quartile(0.75);

        std::vector<std::int32_t> bins(loc_values.size());
        for (std::size_t i = 0; i < loc_values.size(); ++i) {
            const auto v = loc_values[i];
            bins[i] = v <= q1 ? 0 : v <= q2 ? 1 : v <= q3 ? 2 : 3;
        }
        stats.push_back(FeatureStat{"loc", info_gain_discrete(bins, labels), false,
                                    0, 0, 0});
    }

    std::sort(stats.begin(), stats.end(), [](const FeatureStat& a, const FeatureStat& b) {
        if (a.info_gain != b.info_gain) return a.info_gain > b.info_gain;
        return a.feature < b.feature;
    });
    if (k != 0 && stats.size() > k) stats.resize(k);
    return stats;
}

std::vector<FeatureStat> rank_features(const Corpus& corpus, AblationConfig ablation,
                                       std::size_t k) {
    return rank_features(corpus, rank_config_for(ablation), k);
}

RankingOverlap compare_rankings(std::span<const FeatureStat> a,
                                std::span<const FeatureStat> b, std::size_t k) {
    const auto take = [k](std::span<const FeatureStat> list) {
        std::map<std::string, std::size_t> ranks;  // 1-based
        const auto limit = k == 0 ? list.size() : std::min(k, list.size());
        for (std::size_t i = 0; i < limit; ++i) ranks.emplace(list[i].feature, i + 1);
        return ranks;
    };
    const auto ranks_a = take(a);
    const auto ranks_b = take(b);

    RankingOverlap result;
    for (const auto& [feature, rank] : ranks_a) {
        auto it = ranks_b.find(feature);
        if (it != ranks_b.end())
            result.shared.push_back({feature, rank, it->second});
        else
            result.only_a.push_back(feature);
    }
    for (const auto& [feature, rank] : ranks_b)
        if (!ranks_a.count(feature)) result.only_b.push_back(feature);
    result.overlap = result.shared.size();
    std::sort(result.shared.begin(), result.shared.end(),
              [](const auto& x, const auto& y) { return x.rank_a < y.rank_a; });
    return result;
}

}  // namespace flakelex
