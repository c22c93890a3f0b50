#include "flakelex/textpipe.hpp"

#include "porter.hpp"

namespace flakelex {
namespace {

inline bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '$';
}

inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return is_lower(c) || is_upper(c); }

inline bool all_lower_alpha(const Token& t) {
    for (char c : t)
        if (!is_lower(c)) return false;
    return !t.empty();
}

}  // namespace

std::vector<Token> tokenize_raw(std::string_view body) {
    std::vector<Token> tokens;
    Token current;
    for (char c : body) {
        if (is_word_char(c)) {
            current.push_back(c);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<Token> split_identifier(const Token& token) {
    std::vector<Token> words;
    Token current;
    auto flush = [&] {
        if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    };
    for (char c : token) {
        if (c == '_' || c == '$') {
            flush();
            continue;
        }
        if (!current.empty()) {
            const char prev = current.back();
            if ((is_lower(prev) || is_digit(prev)) && is_upper(c)) {
                flush();
            } else if (is_alpha(prev) && is_digit(c)) {
                flush();
            } else if (is_digit(prev) && is_alpha(c)) {
                flush();
            } else if (is_upper(prev) && is_lower(c) && current.size() >= 2 &&
                       is_upper(current[current.size() - 2])) {
                // end of an uppercase run: the last capital opens the next word
                Token run = current.substr(0, current.size() - 1);
                char head = current.back();
                current = std::move(run);
                flush();
                current.push_back(head);
            }
        }
        current.push_back(c);
    }
    flush();
    return words;
}

Token lowercase(Token token) {
    for (char& c : token)
        if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
    return token;
}

std::vector<Token> remove_stop_words(std::vector<Token> tokens) {
    std::vector<Token> kept;
    kept.reserve(tokens.size());
    for (auto& t : tokens)
        if (!is_stop_word(t)) kept.push_back(std::move(t));
    return kept;
}

Token stem(const Token& token) {
    if (!all_lower_alpha(token)) return token;
    return detail::porter_stem(token);
}

std::vector<Token> run_pipeline(const PipelineConfig& cfg, std::string_view body) {
    std::vector<Token> tokens = tokenize_raw(body);
    if (cfg.split_identifiers) {
        std::vector<Token> split;
        split.reserve(tokens.size());
        for (const auto& t : tokens)
            for (auto& part : split_identifier(t)) split.push_back(std::move(part));
        tokens = std::move(split);
    }
    if (cfg.lowercase)
        for (auto& t : tokens) t = lowercase(std::move(t));
    if (cfg.remove_stop_words) tokens = remove_stop_words(std::move(tokens));
    if (cfg.stem)
        for (auto& t : tokens) t = stem(t);
    return tokens;
}

}  // namespace flakelex
