#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace flakelex {

using Token = std::string;

// Which normalization stages run after raw tokenization. Stages always apply
// in this fixed order: identifier split -> lowercase -> stop-word removal ->
// stemming.
struct PipelineConfig {
    bool split_identifiers = true;
    bool lowercase = true;
    bool remove_stop_words = true;
    bool stem = true;

    static constexpr PipelineConfig all_on() { return {true, true, true, true}; }
    static constexpr PipelineConfig all_off() { return {false, false, false, false}; }
    static constexpr PipelineConfig only_split() { return {true, false, false, false}; }

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Splits source text on every character outside [A-Za-z0-9_$]. Empty
// fragments are dropped; order and multiplicity are preserved.
std::vector<Token> tokenize_raw(std::string_view body);

// camelCase / snake_case / acronym decomposition of a single token:
//   getJobId    -> get Job Id
//   HTTPServer2 -> HTTP Server 2   (the last capital of a run starts the next word)
//   snake_case  -> snake case      ('_' and '$' are separators, removed)
// May return an empty list when the token consists only of separators.
std::vector<Token> split_identifier(const Token& token);

// ASCII lowercase; bytes outside A-Z pass through.
Token lowercase(Token token);

// Drops tokens found in the embedded stop-word list, preserving order.
// Matching is exact, so it only fires on lowercased tokens.
std::vector<Token> remove_stop_words(std::vector<Token> tokens);

// Porter suffix-stripping stemmer. Applies only to tokens made entirely of
// lowercase ASCII letters; anything else passes through unchanged.
Token stem(const Token& token);

std::vector<Token> run_pipeline(const PipelineConfig& cfg, std::string_view body);

// The embedded English stop-word list (SMART).
const std::unordered_set<std::string>& stop_words();
bool is_stop_word(std::string_view word);

}  // namespace flakelex
