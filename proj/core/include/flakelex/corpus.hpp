#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace flakelex {

enum class Label { Flaky, NonFlaky, Unknown };

// Parses "flaky" / "non-flaky" / "unknown", case-insensitively.
std::optional<Label> parse_label(std::string_view text);
std::string_view label_name(Label label);

// One labeled test method.
struct TestCase {
    std::string project;
    std::string qualified_name;
    std::string body;
    Label label = Label::Unknown;
};

struct Corpus {
    std::vector<TestCase> cases;
    std::string origin;  // provenance tag, typically the source path

    std::size_t size() const { return cases.size(); }
    bool empty() const { return cases.empty(); }
    std::set<std::string> projects() const;
    std::size_t count(Label label) const;
    bool has_both_classes() const {
        return count(Label::Flaky) > 0 && count(Label::NonFlaky) > 0;
    }
};

enum class CorpusFormat { Csv, Jsonl };

// Columns/keys: project, qualified_name, label, body. CSV bodies are
// RFC 4180 quoted; JSONL is one object per line. Line numbers in errors are
// 1-based file lines (the CSV header is line 1).
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
// Format chosen from the extension (.csv / .jsonl).
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format);

// Loads a CSV with foreign column names. column_map maps canonical names
// (project, qualified_name, label, body) to the file's column names;
// label_map optionally rewrites the file's label values to the canonical
// flaky / non-flaky / unknown.
Corpus load_foreign_csv(const std::filesystem::path& path,
                        const std::map<std::string, std::string>& column_map,
                        const std::map<std::string, std::string>& label_map);

// Throws Error unless every case is labeled and both classes are present.
void require_training_corpus(const Corpus& corpus);

struct DedupeResult {
    Corpus corpus;
    std::size_t dropped = 0;
    std::size_t label_conflicts = 0;  // duplicates whose label disagreed with the kept one
};

// Keeps the first occurrence of each qualified_name; order otherwise preserved.
DedupeResult dedupe(const Corpus& corpus);

struct SplitResult {
    Corpus train;
    Corpus test;
};

// Per-label train size is floor(fraction * n + 0.5); the remainder goes to
// the test side. Deterministic for a fixed seed; throws DegenerateSplit when
// either side would be empty for some label.
SplitResult stratified_split(const Corpus& corpus, double train_fraction,
                             std::uint64_t seed);

enum class FilterMode { Intra, Inter };
std::optional<FilterMode> parse_filter_mode(std::string_view text);

struct FilterResult {
    Corpus corpus;
    std::size_t dropped_duplicates = 0;  // validation cases whose name appears in the reference
    std::size_t projects_retained = 0;
};

// Intra keeps validation cases whose project appears in the reference corpus;
// inter keeps the complement. Validation is first deduped against the
// reference by qualified_name.
FilterResult project_filter(const Corpus& validation, const Corpus& reference,
                            FilterMode mode);

}  // namespace flakelex
