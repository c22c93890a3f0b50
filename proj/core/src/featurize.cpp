#include "flakelex/featurize.hpp"

#include <algorithm>
#include <map>

#include "flakelex/error.hpp"

namespace flakelex {

const std::array<std::string_view, kJavaKeywordCount>& java_keywords() {
    static const std::array<std::string_view, kJavaKeywordCount> keywords = {
        "abstract", "assert",       "boolean",  "break",      "byte",
        "case",     "catch",        "char",     "class",      "const",
        "continue", "default",      "do",       "double",     "else",
        "enum",     "extends",      "final",    "finally",    "float",
        "for",      "goto",         "if",       "implements", "import",
        "instanceof", "int",        "interface", "long",      "native",
        "new",      "package",      "private",  "protected",  "public",
        "return",   "short",        "static",   "strictfp",   "super",
        "switch",   "synchronized", "this",     "throw",      "throws",
        "transient", "try",         "void",     "volatile",   "while",
        "true",     "false",        "null",     "var",        "yield",
        "record",
    };
    return keywords;
}

namespace {

// keyword text -> slot, built once
const std::map<std::string_view, std::size_t>& keyword_index() {
    static const auto index = [] {
        std::map<std::string_view, std::size_t> m;
        const auto& kw = java_keywords();
        for (std::size_t i = 0; i < kw.size(); ++i) m.emplace(kw[i], i);
        return m;
    }();
    return index;
}

}  // namespace

KeywordCounts count_java_keywords(std::string_view body) {
    KeywordCounts out;
    const auto& index = keyword_index();
    for (const auto& token : tokenize_raw(body)) {
        auto it = index.find(token);
        if (it != index.end()) {
            ++out.counts[it->second];
            ++out.total;
        }
    }
    return out;
}

std::int32_t measure_loc(std::string_view body) {
    std::int32_t lines = 0;
    bool line_has_content = false;
    for (char c : body) {
        if (c == '\n') {
            if (line_has_content) ++lines;
            line_has_content = false;
        } else if (c != ' ' && c != '\t' && c != '\r' && c != '\v' && c != '\f') {
            line_has_content = true;
        }
    }
    if (line_has_content) ++lines;
    return lines;
}

const std::array<AblationConfig, kAblationCount>& all_ablations() {
    static const std::array<AblationConfig, kAblationCount> order = {
        AblationConfig::AllFeatures,        AblationConfig::NoStemming,
        AblationConfig::NoStopWordRemoval,  AblationConfig::NoLowercasing,
        AblationConfig::NoIdentifierSplit,  AblationConfig::OnlySplitIdentifiers,
        AblationConfig::NoLinesOfCode,      AblationConfig::NoJavaKeywords,
        AblationConfig::NoIdentifiers,
    };
    return order;
}

std::string_view ablation_name(AblationConfig a) {
    switch (a) {
        case AblationConfig::AllFeatures: return "All Features";
        case AblationConfig::NoStemming: return "No Stemming";
        case AblationConfig::NoStopWordRemoval: return "No Stop W. Removal";
        case AblationConfig::NoLowercasing: return "No Lowercasing";
        case AblationConfig::NoIdentifierSplit: return "No Identifier Split.";
        case AblationConfig::OnlySplitIdentifiers: return "Only Split Identif.";
        case AblationConfig::NoLinesOfCode: return "No Lines of Code";
        case AblationConfig::NoJavaKeywords: return "No Java Keywords";
        case AblationConfig::NoIdentifiers: return "No Identifiers";
    }
    return "?";
}

std::string_view ablation_id(AblationConfig a) {
    switch (a) {
        case AblationConfig::AllFeatures: return "all-features";
        case AblationConfig::NoStemming: return "no-stemming";
        case AblationConfig::NoStopWordRemoval: return "no-stop-word-removal";
        case AblationConfig::NoLowercasing: return "no-lowercasing";
        case AblationConfig::NoIdentifierSplit: return "no-identifier-split";
        case AblationConfig::OnlySplitIdentifiers: return "only-split-identifiers";
        case AblationConfig::NoLinesOfCode: return "no-lines-of-code";
        case AblationConfig::NoJavaKeywords: return "no-java-keywords";
        case AblationConfig::NoIdentifiers: return "no-identifiers";
    }
    return "?";
}

std::optional<AblationConfig> parse_ablation(std::string_view id) {
    for (auto a : all_ablations())
        if (ablation_id(a) == id) return a;
    return std::nullopt;
}

AblationSpec apply_ablation(AblationConfig a) {
    AblationSpec spec;  // default pipeline, all families on
    switch (a) {
        case AblationConfig::AllFeatures:
            break;
        case AblationConfig::NoStemming:
            spec.pipeline.stem = false;
            break;
        case AblationConfig::NoStopWordRemoval:
            spec.pipeline.remove_stop_words = false;
            break;
        case AblationConfig::NoLowercasing:
            spec.pipeline.lowercase = false;
            break;
        case AblationConfig::NoIdentifierSplit:
            spec.pipeline.split_identifiers = false;
            break;
        case AblationConfig::OnlySplitIdentifiers:
            spec.pipeline = PipelineConfig::only_split();
            break;
        case AblationConfig::NoLinesOfCode:
            spec.mask.loc = false;
            break;
        case AblationConfig::NoJavaKeywords:
            spec.mask.keywords = false;
            break;
        case AblationConfig::NoIdentifiers:
            spec.mask.tokens = false;
            break;
    }
    return spec;
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

void Vocabulary::freeze() {
    lookup_.clear();
    lookup_.reserve(tokens_.size());
    for (std::uint32_t i = 0; i < tokens_.size(); ++i)
        lookup_.emplace_back(tokens_[i], i);
    std::sort(lookup_.begin(), lookup_.end());

    std::uint64_t h = 0xcbf29ce484222325ull;
    h = fnv1a(h, ablation_id(ablation_));
    for (const auto& t : tokens_) {
        h = fnv1a(h, t);
        h = fnv1a(h, std::string_view("\x1f", 1));
    }
    fingerprint_ = h;
}

Vocabulary Vocabulary::build(const Corpus& train, AblationConfig ablation) {
    const auto spec = apply_ablation(ablation);
    Vocabulary vocab;
    vocab.ablation_ = ablation;

    if (spec.mask.tokens) {
        // first-appearance order keeps rebuilds identical
        std::vector<std::string> ordered;
        std::map<std::string, std::uint32_t> seen;
        for (const auto& c : train.cases) {
            for (auto& t : run_pipeline(spec.pipeline, c.body)) {
                if (seen.emplace(t, static_cast<std::uint32_t>(ordered.size())).second)
                    ordered.push_back(std::move(t));
            }
        }
        if (ordered.empty())
            throw EmptyVocabulary("no tokens produced from the training corpus");
        vocab.tokens_ = std::move(ordered);
    }
    vocab.freeze();
    return vocab;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens,
                                   AblationConfig ablation) {
    Vocabulary vocab;
    vocab.tokens_ = std::move(tokens);
    vocab.ablation_ = ablation;
    vocab.freeze();
    return vocab;
}

std::optional<std::uint32_t> Vocabulary::column_of(std::string_view token) const {
    auto it = std::lower_bound(lookup_.begin(), lookup_.end(), token,
                               [](const auto& entry, std::string_view t) {
                                   return entry.first < t;
                               });
    if (it == lookup_.end() || it->first != token) return std::nullopt;
    return it->second;
}

std::size_t Vocabulary::width() const {
    const auto mask = apply_ablation(ablation_).mask;
    std::size_t width = mask.tokens ? tokens_.size() : 0;
    if (mask.keywords) width += kJavaKeywordCount + 1;
    if (mask.loc) width += 1;
    return width;
}

FeatureVector vectorize(const TestCase& test, const Vocabulary& vocab,
                        AblationConfig ablation) {
    if (ablation != vocab.ablation())
        throw ConfigMismatch("vocabulary was built with ablation \"" +
                             std::string(ablation_id(vocab.ablation())) +
                             "\" but \"" + std::string(ablation_id(ablation)) +
                             "\" was requested");
    const auto spec = apply_ablation(ablation);

    FeatureVector fv;
    if (spec.mask.tokens) {
        std::map<std::uint32_t, std::int32_t> counts;
        for (const auto& t : run_pipeline(spec.pipeline, test.body))
            if (auto col = vocab.column_of(t)) ++counts[*col];
        fv.token_counts.assign(counts.begin(), counts.end());
    }
    if (spec.mask.keywords) {
        auto kw = count_java_keywords(test.body);
        fv.keyword_counts = kw.counts;
        fv.keyword_total = kw.total;
    }
    if (spec.mask.loc) fv.loc = measure_loc(test.body);
    return fv;
}

double SparseRow::at(std::uint32_t column) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), column,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    if (it == entries.end() || it->first != column) return 0.0;
    return it->second;
}

SparseRow to_row(const FeatureVector& fv, const Vocabulary& vocab) {
    const auto mask = apply_ablation(vocab.ablation()).mask;
    SparseRow row;
    std::uint32_t base = 0;
    if (mask.tokens) {
        row.entries.reserve(fv.token_counts.size() + kJavaKeywordCount + 2);
        for (const auto& [col, count] : fv.token_counts)
            row.entries.emplace_back(col, static_cast<double>(count));
        base = static_cast<std::uint32_t>(vocab.token_count());
    }
    if (mask.keywords) {
        for (std::uint32_t i = 0; i < kJavaKeywordCount; ++i)
            if (fv.keyword_counts[i] != 0)
                row.entries.emplace_back(base + i, static_cast<double>(fv.keyword_counts[i]));
        base += kJavaKeywordCount;
        if (fv.keyword_total != 0)
            row.entries.emplace_back(base, static_cast<double>(fv.keyword_total));
        base += 1;
    }
    if (mask.loc) {
        if (fv.loc != 0) row.entries.emplace_back(base, static_cast<double>(fv.loc));
    }
    return row;
}

FeatureMatrix vectorize_corpus(const Corpus& corpus, const Vocabulary& vocab,
                               AblationConfig ablation) {
    FeatureMatrix matrix;
    matrix.width = vocab.width();
    matrix.fingerprint = vocab.fingerprint();
    matrix.rows.reserve(corpus.size());
    for (const auto& test : corpus.cases)
        matrix.rows.push_back(to_row(vectorize(test, vocab, ablation), vocab));
    return matrix;
}

std::string column_name(const Vocabulary& vocab, std::uint32_t column) {
    const auto mask = apply_ablation(vocab.ablation()).mask;
    std::uint32_t base = 0;
    if (mask.tokens) {
        if (column < vocab.token_count()) return "token:" + vocab.tokens()[column];
        base = static_cast<std::uint32_t>(vocab.token_count());
    }
    if (mask.keywords) {
        if (column < base + kJavaKeywordCount)
            return "kw:" + std::string(java_keywords()[column - base]);
        if (column == base + kJavaKeywordCount) return "keyword_total";
        base += kJavaKeywordCount + 1;
    }
    if (mask.loc && column == base) return "loc";
    return "column:" + std::to_string(column);
}

}  // namespace flakelex
