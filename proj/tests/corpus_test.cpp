#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "flakelex/corpus.hpp"
#include "flakelex/error.hpp"

using namespace flakelex;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

TestCase make_case(std::string project, std::string name, Label label,
                   std::string body = "assertTrue(x);") {
    return TestCase{std::move(project), std::move(name), std::move(body), label};
}

Corpus synthetic(std::size_t n_flaky, std::size_t n_nonflaky) {
    Corpus c;
    for (std::size_t i = 0; i < n_flaky; ++i)
        c.cases.push_back(make_case("p" + std::to_string(i % 3),
                                    "T.f" + std::to_string(i), Label::Flaky));
    for (std::size_t i = 0; i < n_nonflaky; ++i)
        c.cases.push_back(make_case("p" + std::to_string(i % 3),
                                    "T.n" + std::to_string(i), Label::NonFlaky));
    return c;
}

}  // namespace

TEST_CASE("load_corpus parses the CSV schema") {
    auto path = temp_file("flakelex_basic.csv",
                          "project,qualified_name,label,body\n"
                          "p1,a.T.t1,flaky,\"assertEquals(a, b);\"\n"
                          "p1,a.T.t2,FLAKY,foo()\n"
                          "p2,b.T.t1,non-flaky,bar()\n");
    auto corpus = load_corpus(path, CorpusFormat::Csv);
    REQUIRE(corpus.size() == 3);
    CHECK(corpus.count(Label::Flaky) == 2);
    CHECK(corpus.count(Label::NonFlaky) == 1);
    CHECK(corpus.cases[0].body == "assertEquals(a, b);");
    CHECK(corpus.projects() == std::set<std::string>{"p1", "p2"});
}

TEST_CASE("load_corpus rejects bad labels with the line number") {
    auto path = temp_file("flakelex_badlabel.csv",
                          "project,qualified_name,label,body\n"
                          "p1,a.T.t1,maybe,foo()\n");
    try {
        load_corpus(path, CorpusFormat::Csv);
        FAIL("expected BadLabel");
    } catch (const BadLabel& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("load_corpus boundary cases") {
    SUBCASE("header-only file yields an empty corpus") {
        auto path = temp_file("flakelex_empty.csv", "project,qualified_name,label,body\n");
        CHECK(load_corpus(path, CorpusFormat::Csv).empty());
    }
    SUBCASE("missing column") {
        auto path = temp_file("flakelex_missing.csv", "project,name,label,body\nx,y,flaky,z\n");
        CHECK_THROWS_AS(load_corpus(path, CorpusFormat::Csv), MissingColumn);
    }
    SUBCASE("empty body") {
        auto path = temp_file("flakelex_emptybody.csv",
                              "project,qualified_name,label,body\np1,a.T.t1,flaky,\n");
        CHECK_THROWS_AS(load_corpus(path, CorpusFormat::Csv), EmptyBody);
    }
    SUBCASE("unknown labels load fine") {
        auto path = temp_file("flakelex_unknown.csv",
                              "project,qualified_name,label,body\np1,a.T.t1,Unknown,f()\n");
        CHECK(load_corpus(path, CorpusFormat::Csv).count(Label::Unknown) == 1);
    }
}

TEST_CASE("jsonl round trip preserves corpus content") {
    Corpus corpus;
    corpus.cases.push_back(make_case("p1", "a.T.t1", Label::Flaky,
                                     "line1\nline2 \"quoted\", comma"));
    corpus.cases.push_back(make_case("p2", "b.T.t2", Label::NonFlaky, "x();"));
    corpus.cases.push_back(make_case("p2", "b.T.t3", Label::Unknown, "y();"));

    for (auto format : {CorpusFormat::Csv, CorpusFormat::Jsonl}) {
        auto path = temp_file(format == CorpusFormat::Csv ? "flakelex_rt.csv"
                                                          : "flakelex_rt.jsonl",
                              "");
        write_corpus(corpus, path, format);
        auto loaded = load_corpus(path, format);
        REQUIRE(loaded.size() == corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            CHECK(loaded.cases[i].project == corpus.cases[i].project);
            CHECK(loaded.cases[i].qualified_name == corpus.cases[i].qualified_name);
            CHECK(loaded.cases[i].body == corpus.cases[i].body);
            CHECK(loaded.cases[i].label == corpus.cases[i].label);
        }
    }
}

TEST_CASE("csv round trip under random quoting torture") {
    std::mt19937 rng(11);
    const char* pieces[] = {"\"", ",", "\n", "a", "b;", " ", "}{"};
    Corpus corpus;
    for (int i = 0; i < 30; ++i) {
        std::string body;
        const int len = 1 + static_cast<int>(rng() % 12);
        for (int j = 0; j < len; ++j) body += pieces[rng() % 7];
        if (body.find_first_not_of(" \n") == std::string::npos) body += "x";
        corpus.cases.push_back(
            make_case("p", "T.t" + std::to_string(i), Label::Flaky, body));
    }
    auto path = temp_file("flakelex_torture.csv", "");
    write_corpus(corpus, path, CorpusFormat::Csv);
    auto loaded = load_corpus(path, CorpusFormat::Csv);
    REQUIRE(loaded.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        CHECK(loaded.cases[i].body == corpus.cases[i].body);
}

TEST_CASE("dedupe keeps the first occurrence") {
    SUBCASE("simple duplicate") {
        Corpus c;
        c.cases = {make_case("p", "A", Label::Flaky), make_case("p", "A", Label::Flaky),
                   make_case("p", "B", Label::NonFlaky)};
        auto result = dedupe(c);
        REQUIRE(result.corpus.size() == 2);
        CHECK(result.corpus.cases[0].qualified_name == "A");
        CHECK(result.corpus.cases[1].qualified_name == "B");
        CHECK(result.dropped == 1);
        CHECK(result.label_conflicts == 0);
    }
    SUBCASE("all distinct is the identity") {
        auto c = synthetic(4, 4);
        auto result = dedupe(c);
        CHECK(result.corpus.size() == 8);
        CHECK(result.dropped == 0);
    }
    SUBCASE("conflicting labels keep the first and are counted") {
        Corpus c;
        c.cases = {make_case("p", "A", Label::Flaky),
                   make_case("p", "A", Label::NonFlaky)};
        auto result = dedupe(c);
        REQUIRE(result.corpus.size() == 1);
        CHECK(result.corpus.cases[0].label == Label::Flaky);
        CHECK(result.label_conflicts == 1);
    }
}

TEST_CASE("stratified_split honors per-label counts") {
    auto corpus = synthetic(10, 10);
    auto split = stratified_split(corpus, 0.8, 42);
    CHECK(split.train.count(Label::Flaky) == 8);
    CHECK(split.train.count(Label::NonFlaky) == 8);
    CHECK(split.test.count(Label::Flaky) == 2);
    CHECK(split.test.count(Label::NonFlaky) == 2);
}

TEST_CASE("stratified_split is deterministic and partitions the corpus") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto nf = 3 + rng() % 40;  // n >= 3 keeps both split sides non-empty
        const auto nn = 3 + rng() % 40;
        const auto seed = rng();
        auto corpus = synthetic(nf, nn);
        auto a = stratified_split(corpus, 0.8, seed);
        auto b = stratified_split(corpus, 0.8, seed);

        auto names = [](const Corpus& c) {
            std::set<std::string> out;
            for (const auto& t : c.cases) out.insert(t.qualified_name);
            return out;
        };
        CHECK(names(a.train) == names(b.train));
        CHECK(a.train.size() + a.test.size() == corpus.size());

        auto train_names = names(a.train);
        for (const auto& t : a.test.cases)
            CHECK(train_names.count(t.qualified_name) == 0);

        const auto expect_flaky =
            static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(nf) + 0.5));
        CHECK(a.train.count(Label::Flaky) == expect_flaky);
    }
}

TEST_CASE("stratified_split rejects degenerate cases") {
    SUBCASE("one label would have an empty side") {
        auto corpus = synthetic(1, 100);
        CHECK_THROWS_AS(stratified_split(corpus, 0.8, 1), DegenerateSplit);
    }
    SUBCASE("single-class corpus") {
        auto corpus = synthetic(5, 0);
        CHECK_THROWS_AS(stratified_split(corpus, 0.8, 1), DegenerateSplit);
    }
    SUBCASE("fraction outside (0,1)") {
        auto corpus = synthetic(5, 5);
        CHECK_THROWS_AS(stratified_split(corpus, 0.0, 1), DegenerateSplit);
        CHECK_THROWS_AS(stratified_split(corpus, 1.0, 1), DegenerateSplit);
    }
}

TEST_CASE("project_filter selects by project membership") {
    Corpus reference;
    reference.cases = {make_case("A", "ref.1", Label::Flaky),
                       make_case("B", "ref.2", Label::NonFlaky)};
    Corpus validation;
    validation.cases = {make_case("A", "v.1", Label::Flaky),
                        make_case("B", "v.2", Label::Flaky),
                        make_case("C", "v.3", Label::Flaky),
                        make_case("C", "v.4", Label::Flaky)};

    auto intra = project_filter(validation, reference, FilterMode::Intra);
    CHECK(intra.corpus.size() == 2);
    CHECK(intra.projects_retained == 2);

    auto inter = project_filter(validation, reference, FilterMode::Inter);
    CHECK(inter.corpus.size() == 2);
    CHECK(inter.projects_retained == 1);
    for (const auto& c : inter.corpus.cases) CHECK(c.project == "C");

    // intra and inter partition the validation corpus
    CHECK(intra.corpus.size() + inter.corpus.size() == validation.size());
}

TEST_CASE("project_filter dedupes against the reference first") {
    Corpus reference;
    reference.cases = {make_case("A", "shared.name", Label::Flaky)};
    Corpus validation;
    validation.cases = {make_case("A", "shared.name", Label::Flaky),
                        make_case("A", "fresh.name", Label::Flaky)};
    auto result = project_filter(validation, reference, FilterMode::Intra);
    CHECK(result.dropped_duplicates == 1);
    REQUIRE(result.corpus.size() == 1);
    CHECK(result.corpus.cases[0].qualified_name == "fresh.name");
}

TEST_CASE("intra plus inter covers the deduped validation corpus") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Corpus reference = synthetic(6, 6);
        Corpus validation;
        for (int i = 0; i < 30; ++i)
            validation.cases.push_back(make_case("p" + std::to_string(rng() % 6),
                                                 "v.t" + std::to_string(i),
                                                 Label::Flaky));
        auto deduped = dedupe(validation).corpus;
        auto intra = project_filter(deduped, reference, FilterMode::Intra);
        auto inter = project_filter(deduped, reference, FilterMode::Inter);
        CHECK(intra.corpus.size() + inter.corpus.size() == deduped.size());
    }
}

TEST_CASE("require_training_corpus") {
    CHECK_NOTHROW(require_training_corpus(synthetic(2, 2)));
    CHECK_THROWS_AS(require_training_corpus(synthetic(2, 0)), Error);
    Corpus with_unknown = synthetic(2, 2);
    with_unknown.cases.push_back(make_case("p", "u.1", Label::Unknown));
    CHECK_THROWS_AS(require_training_corpus(with_unknown), Error);
}
