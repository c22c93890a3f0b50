#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flakelex/corpus.hpp"
#include "flakelex/textpipe.hpp"

namespace flakelex {

inline constexpr std::size_t kJavaKeywordCount = 56;

// The 56 counted Java keywords: the 50 reserved words (including const and
// goto), the literals true/false/null, and the contextual var/yield/record.
const std::array<std::string_view, kJavaKeywordCount>& java_keywords();

struct KeywordCounts {
    std::array<std::int32_t, kJavaKeywordCount> counts{};
    std::int32_t total = 0;
};

// Whole-word, case-sensitive occurrences in the raw body (word boundaries are
// the tokenizer's delimiter set, so `publicity` does not count as `public`).
KeywordCounts count_java_keywords(std::string_view body);

// Number of lines containing at least one non-whitespace character.
std::int32_t measure_loc(std::string_view body);

// The nine feature/preprocessing configurations, in presentation order.
enum class AblationConfig {
    AllFeatures,
    NoStemming,
    NoStopWordRemoval,
    NoLowercasing,
    NoIdentifierSplit,
    OnlySplitIdentifiers,
    NoLinesOfCode,
    NoJavaKeywords,
    NoIdentifiers,
};

inline constexpr std::size_t kAblationCount = 9;
const std::array<AblationConfig, kAblationCount>& all_ablations();
std::string_view ablation_name(AblationConfig a);   // display name
std::string_view ablation_id(AblationConfig a);     // CLI identifier
std::optional<AblationConfig> parse_ablation(std::string_view id);

struct FeatureMask {
    bool tokens = true;
    bool keywords = true;  // covers the 56 counts and their total
    bool loc = true;

    friend bool operator==(const FeatureMask&, const FeatureMask&) = default;
};

struct AblationSpec {
    PipelineConfig pipeline;
    FeatureMask mask;
};

AblationSpec apply_ablation(AblationConfig a);

// Token -> column mapping built from a training corpus; frozen after build.
class Vocabulary {
public:
    static Vocabulary build(const Corpus& train, AblationConfig ablation);

    std::size_t token_count() const { return tokens_.size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::optional<std::uint32_t> column_of(std::string_view token) const;
    AblationConfig ablation() const { return ablation_; }

    // covers the ablation identity and the ordered token list
    std::uint64_t fingerprint() const { return fingerprint_; }

    // dense width of feature vectors drawn against this vocabulary:
    // tokens + 56 keyword counts + keyword total + loc, families per mask
    std::size_t width() const;

    // Rebuilds column lookup from an ordered token list (model loading).
    static Vocabulary from_tokens(std::vector<std::string> tokens, AblationConfig ablation);

private:
    std::vector<std::string> tokens_;
    std::vector<std::pair<std::string_view, std::uint32_t>> lookup_;  // sorted by token
    AblationConfig ablation_ = AblationConfig::AllFeatures;
    std::uint64_t fingerprint_ = 0;

    void freeze();
};

// Sparse counts for one test case.
struct FeatureVector {
    std::vector<std::pair<std::uint32_t, std::int32_t>> token_counts;  // sorted by column
    std::array<std::int32_t, kJavaKeywordCount> keyword_counts{};
    std::int32_t keyword_total = 0;
    std::int32_t loc = 0;
};

FeatureVector vectorize(const TestCase& test, const Vocabulary& vocab,
                        AblationConfig ablation);

// One row of the dense layout [tokens | keywords | keyword_total | loc],
// with masked families omitted entirely.
struct SparseRow {
    std::vector<std::pair<std::uint32_t, double>> entries;  // sorted by column

    double at(std::uint32_t column) const;
};

SparseRow to_row(const FeatureVector& fv, const Vocabulary& vocab);

struct FeatureMatrix {
    std::size_t width = 0;
    std::vector<SparseRow> rows;
    std::uint64_t fingerprint = 0;  // 0 when not tied to a vocabulary
};

FeatureMatrix vectorize_corpus(const Corpus& corpus, const Vocabulary& vocab,
                               AblationConfig ablation);

// Human-readable name of a dense column ("token:get", "kw:throws",
// "keyword_total", "loc").
std::string column_name(const Vocabulary& vocab, std::uint32_t column);

}  // namespace flakelex
