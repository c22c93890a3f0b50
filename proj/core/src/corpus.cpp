#include "flakelex/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "flakelex/error.hpp"

namespace flakelex {

using nlohmann::json;

std::optional<Label> parse_label(std::string_view text) {
    std::string lower(text);
    for (char& c : lower)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (lower == "flaky") return Label::Flaky;
    if (lower == "non-flaky") return Label::NonFlaky;
    if (lower == "unknown") return Label::Unknown;
    return std::nullopt;
}

std::string_view label_name(Label label) {
    switch (label) {
        case Label::Flaky: return "flaky";
        case Label::NonFlaky: return "non-flaky";
        case Label::Unknown: return "unknown";
    }
    return "unknown";
}

std::set<std::string> Corpus::projects() const {
    std::set<std::string> out;
    for (const auto& c : cases) out.insert(c.project);
    return out;
}

std::size_t Corpus::count(Label label) const {
    std::size_t n = 0;
    for (const auto& c : cases)
        if (c.label == label) ++n;
    return n;
}

namespace {

constexpr const char* kColumns[4] = {"project", "qualified_name", "label", "body"};

TestCase make_case(std::string project, std::string name, std::string label_text,
                   std::string body, std::size_t line) {
    auto label = parse_label(label_text);
    if (!label) throw BadLabel(line, label_text);
    if (body.empty()) throw EmptyBody(line);
    return TestCase{std::move(project), std::move(name), std::move(body), *label};
}

Corpus load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    detail::CsvReader reader(in);

    std::size_t line = 0;
    auto header = reader.next(line);
    if (!header) throw MissingColumn(kColumns[0]);

    // required columns may appear in any order; extras are ignored
    int index[4] = {-1, -1, -1, -1};
    for (std::size_t i = 0; i < header->size(); ++i)
        for (int k = 0; k < 4; ++k)
            if ((*header)[i] == kColumns[k]) index[k] = static_cast<int>(i);
    for (int k = 0; k < 4; ++k)
        if (index[k] < 0) throw MissingColumn(kColumns[k]);

    Corpus corpus;
    corpus.origin = path.string();
    while (auto row = reader.next(line)) {
        if (row->size() < header->size())
            throw Error("line " + std::to_string(line) + ": expected " +
                        std::to_string(header->size()) + " fields, got " +
                        std::to_string(row->size()));
        corpus.cases.push_back(make_case(
            (*row)[index[0]], (*row)[index[1]], (*row)[index[2]], (*row)[index[3]], line));
    }
    return corpus;
}

Corpus load_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());

    Corpus corpus;
    corpus.origin = path.string();
    std::string text;
    std::size_t line = 0;
    bool saw_record = false;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        json obj;
        try {
            obj = json::parse(text);
        } catch (const json::exception& e) {
            throw Error("line " + std::to_string(line) + ": " + e.what());
        }
        for (const char* key : kColumns)
            if (!obj.contains(key)) throw MissingColumn(key);
        saw_record = true;
        corpus.cases.push_back(make_case(obj["project"].get<std::string>(),
                                         obj["qualified_name"].get<std::string>(),
                                         obj["label"].get<std::string>(),
                                         obj["body"].get<std::string>(), line));
    }
    (void)saw_record;
    return corpus;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    return format == CorpusFormat::Csv ? load_csv(path) : load_jsonl(path);
}

Corpus load_foreign_csv(const std::filesystem::path& path,
                        const std::map<std::string, std::string>& column_map,
                        const std::map<std::string, std::string>& label_map) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    detail::CsvReader reader(in);

    std::size_t line = 0;
    auto header = reader.next(line);
    if (!header) throw MissingColumn(kColumns[0]);

    int index[4];
    for (int k = 0; k < 4; ++k) {
        auto mapped = column_map.find(kColumns[k]);
        const std::string& name =
            mapped == column_map.end() ? std::string(kColumns[k]) : mapped->second;
        index[k] = -1;
        for (std::size_t i = 0; i < header->size(); ++i)
            if ((*header)[i] == name) index[k] = static_cast<int>(i);
        if (index[k] < 0) throw MissingColumn(name);
    }

    Corpus corpus;
    corpus.origin = path.string();
    while (auto row = reader.next(line)) {
        if (row->size() < header->size())
            throw Error("line " + std::to_string(line) + ": expected " +
                        std::to_string(header->size()) + " fields, got " +
                        std::to_string(row->size()));
        std::string label = (*row)[index[2]];
        if (auto it = label_map.find(label); it != label_map.end()) label = it->second;
        corpus.cases.push_back(make_case(
            (*row)[index[0]], (*row)[index[1]], label, (*row)[index[3]], line));
    }
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".jsonl") return load_corpus(path, CorpusFormat::Jsonl);
    return load_corpus(path, CorpusFormat::Csv);
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    if (format == CorpusFormat::Csv) {
        out << "project,qualified_name,label,body\n";
        for (const auto& c : corpus.cases)
            out << detail::csv_row({c.project, c.qualified_name,
                                    std::string(label_name(c.label)), c.body});
    } else {
        for (const auto& c : corpus.cases) {
            json obj{{"project", c.project},
                     {"qualified_name", c.qualified_name},
                     {"label", std::string(label_name(c.label))},
                     {"body", c.body}};
            out << obj.dump() << '\n';
        }
    }
    if (!out) throw Error("write failed: " + path.string());
}

void require_training_corpus(const Corpus& corpus) {
    if (corpus.count(Label::Unknown) > 0)
        throw Error("training corpus contains unlabeled cases");
    if (corpus.count(Label::Flaky) == 0 || corpus.count(Label::NonFlaky) == 0)
        throw Error("training corpus must contain both flaky and non-flaky cases");
}

DedupeResult dedupe(const Corpus& corpus) {
    DedupeResult result;
    result.corpus.origin = corpus.origin;
    std::unordered_map<std::string, Label> seen;
    for (const auto& c : corpus.cases) {
        auto [it, inserted] = seen.emplace(c.qualified_name, c.label);
        if (inserted) {
            result.corpus.cases.push_back(c);
        } else {
            ++result.dropped;
            if (it->second != c.label) ++result.label_conflicts;
        }
    }
    return result;
}

SplitResult stratified_split(const Corpus& corpus, double train_fraction,
                             std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DegenerateSplit("train fraction must lie in (0,1)");
    if (corpus.count(Label::Unknown) > 0)
        throw DegenerateSplit("cannot split a corpus with unlabeled cases");
    if (!corpus.has_both_classes())
        throw DegenerateSplit("corpus must contain both labels to split");

    std::vector<std::size_t> by_label[2];
    for (std::size_t i = 0; i < corpus.cases.size(); ++i)
        by_label[corpus.cases[i].label == Label::Flaky ? 0 : 1].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<bool> in_train(corpus.cases.size(), false);
    for (auto& group : by_label) {
        std::shuffle(group.begin(), group.end(), rng);
        const auto n = group.size();
        const auto k = static_cast<std::size_t>(
            std::floor(train_fraction * static_cast<double>(n) + 0.5));
        if (k == 0 || k == n)
            throw DegenerateSplit("split would leave an empty side for some label");
        for (std::size_t i = 0; i < k; ++i) in_train[group[i]] = true;
    }

    SplitResult result;
    result.train.origin = corpus.origin + "#train";
    result.test.origin = corpus.origin + "#test";
    for (std::size_t i = 0; i < corpus.cases.size(); ++i)
        (in_train[i] ? result.train : result.test).cases.push_back(corpus.cases[i]);
    return result;
}

std::optional<FilterMode> parse_filter_mode(std::string_view text) {
    if (text == "intra") return FilterMode::Intra;
    if (text == "inter") return FilterMode::Inter;
    return std::nullopt;
}

FilterResult project_filter(const Corpus& validation, const Corpus& reference,
                            FilterMode mode) {
    std::unordered_set<std::string> reference_names;
    for (const auto& c : reference.cases) reference_names.insert(c.qualified_name);
    const auto reference_projects = reference.projects();

    FilterResult result;
    result.corpus.origin = validation.origin;
    for (const auto& c : validation.cases) {
        if (reference_names.count(c.qualified_name)) {
            ++result.dropped_duplicates;
            continue;
        }
        const bool known_project = reference_projects.count(c.project) > 0;
        if ((mode == FilterMode::Intra) == known_project)
            result.corpus.cases.push_back(c);
    }
    result.projects_retained = result.corpus.projects().size();
    return result;
}

}  // namespace flakelex
