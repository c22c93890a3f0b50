#include <doctest.h>

#include <random>

#include "flakelex/error.hpp"
#include "flakelex/featurize.hpp"

using namespace flakelex;

namespace {

Corpus two_body_corpus(const std::string& body_a, const std::string& body_b) {
    Corpus c;
    c.cases.push_back({"p1", "T.a", body_a, Label::Flaky});
    c.cases.push_back({"p2", "T.b", body_b, Label::NonFlaky});
    return c;
}

std::size_t keyword_slot(std::string_view keyword) {
    const auto& kws = java_keywords();
    for (std::size_t i = 0; i < kws.size(); ++i)
        if (kws[i] == keyword) return i;
    FAIL("unknown keyword ", keyword);
    return 0;
}

}  // namespace

TEST_CASE("the keyword list holds 56 distinct entries") {
    std::set<std::string_view> distinct(java_keywords().begin(), java_keywords().end());
    CHECK(distinct.size() == kJavaKeywordCount);
    CHECK(distinct.count("const"));
    CHECK(distinct.count("goto"));
    CHECK(distinct.count("true"));
    CHECK(distinct.count("null"));
    CHECK(distinct.count("record"));
}

TEST_CASE("count_java_keywords counts whole words on the raw body") {
    SUBCASE("plain declaration") {
        auto kw = count_java_keywords("public void f() throws Exception {}");
        CHECK(kw.counts[keyword_slot("public")] == 1);
        CHECK(kw.counts[keyword_slot("void")] == 1);
        CHECK(kw.counts[keyword_slot("throws")] == 1);
        CHECK(kw.total == 3);
    }
    SUBCASE("substrings and case do not count") {
        auto kw = count_java_keywords("int publicity; Public p;");
        CHECK(kw.counts[keyword_slot("public")] == 0);
        CHECK(kw.counts[keyword_slot("int")] == 1);
        CHECK(kw.total == 1);
    }
    SUBCASE("empty body") {
        CHECK(count_java_keywords("").total == 0);
    }
}

TEST_CASE("measure_loc counts non-blank lines") {
    CHECK(measure_loc("a();\n\nb();\n") == 2);
    CHECK(measure_loc("single line") == 1);
    CHECK(measure_loc("") == 0);
    CHECK(measure_loc("  \n\t\n") == 0);
    CHECK(measure_loc("x\n  y") == 2);
}

TEST_CASE("ablation mapping") {
    CHECK(apply_ablation(AblationConfig::AllFeatures).pipeline ==
          PipelineConfig::all_on());
    CHECK(apply_ablation(AblationConfig::AllFeatures).mask ==
          FeatureMask{true, true, true});
    CHECK_FALSE(apply_ablation(AblationConfig::NoStemming).pipeline.stem);
    CHECK_FALSE(apply_ablation(AblationConfig::NoStopWordRemoval).pipeline.remove_stop_words);
    CHECK_FALSE(apply_ablation(AblationConfig::NoLowercasing).pipeline.lowercase);
    CHECK_FALSE(apply_ablation(AblationConfig::NoIdentifierSplit).pipeline.split_identifiers);
    CHECK(apply_ablation(AblationConfig::OnlySplitIdentifiers).pipeline ==
          PipelineConfig::only_split());
    CHECK_FALSE(apply_ablation(AblationConfig::NoLinesOfCode).mask.loc);
    CHECK_FALSE(apply_ablation(AblationConfig::NoJavaKeywords).mask.keywords);
    CHECK_FALSE(apply_ablation(AblationConfig::NoIdentifiers).mask.tokens);
    for (auto a : all_ablations()) CHECK(parse_ablation(ablation_id(a)) == a);
}

TEST_CASE("build_vocabulary unions training tokens") {
    // stem-neutral words, so the default pipeline stores them unchanged
    auto corpus = two_body_corpus("alpha bravo", "bravo zulu");
    auto vocab = Vocabulary::build(corpus, AblationConfig::AllFeatures);
    CHECK(vocab.token_count() == 3);
    CHECK(vocab.column_of("alpha").has_value());
    CHECK(vocab.column_of("bravo").has_value());
    CHECK(vocab.column_of("zulu").has_value());
    CHECK_FALSE(vocab.column_of("echo").has_value());
    CHECK(vocab.width() == 3 + 56 + 1 + 1);

    auto rebuilt = Vocabulary::build(corpus, AblationConfig::AllFeatures);
    CHECK(rebuilt.tokens() == vocab.tokens());
    CHECK(rebuilt.fingerprint() == vocab.fingerprint());
}

TEST_CASE("build_vocabulary edge cases") {
    SUBCASE("no-identifiers ablation has zero token columns") {
        auto corpus = two_body_corpus("alpha bravo", "bravo charlie");
        auto vocab = Vocabulary::build(corpus, AblationConfig::NoIdentifiers);
        CHECK(vocab.token_count() == 0);
        CHECK(vocab.width() == 56 + 1 + 1);
    }
    SUBCASE("token-free corpus is rejected unless tokens are masked") {
        auto corpus = two_body_corpus("!!!", "???");
        CHECK_THROWS_AS(Vocabulary::build(corpus, AblationConfig::AllFeatures),
                        EmptyVocabulary);
        CHECK_NOTHROW(Vocabulary::build(corpus, AblationConfig::NoIdentifiers));
    }
}

TEST_CASE("vectorize counts vocabulary tokens") {
    auto corpus = two_body_corpus("job job id", "id");
    auto vocab = Vocabulary::build(corpus, AblationConfig::AllFeatures);
    TestCase t{"p", "T.x", "job job id", Label::Unknown};
    auto fv = vectorize(t, vocab, AblationConfig::AllFeatures);

    REQUIRE(fv.token_counts.size() == 2);
    CHECK(fv.token_counts[0] ==
          std::pair<std::uint32_t, std::int32_t>{*vocab.column_of("job"), 2});
    CHECK(fv.token_counts[1] ==
          std::pair<std::uint32_t, std::int32_t>{*vocab.column_of("id"), 1});
    CHECK(fv.loc == 1);
}

TEST_CASE("vectorize drops out-of-vocabulary tokens") {
    auto corpus = two_body_corpus("alpha", "bravo");
    auto vocab = Vocabulary::build(corpus, AblationConfig::AllFeatures);
    TestCase t{"p", "T.x", "alpha delta echo", Label::Unknown};
    auto fv = vectorize(t, vocab, AblationConfig::AllFeatures);
    CHECK(fv.token_counts.size() == 1);
}

TEST_CASE("vectorize rejects a mismatched ablation") {
    auto corpus = two_body_corpus("alpha", "bravo");
    auto vocab = Vocabulary::build(corpus, AblationConfig::AllFeatures);
    TestCase t{"p", "T.x", "alpha", Label::Unknown};
    CHECK_THROWS_AS(vectorize(t, vocab, AblationConfig::NoStemming), ConfigMismatch);
}

TEST_CASE("masked families vanish from the dense layout") {
    const std::string body = "public int job = 1;\nwhile (true) { job++; }";
    auto corpus = two_body_corpus(body, "job other");

    auto all_vocab = Vocabulary::build(corpus, AblationConfig::AllFeatures);
    TestCase t{"p", "T.x", body, Label::Unknown};
    auto all_row = to_row(vectorize(t, all_vocab, AblationConfig::AllFeatures), all_vocab);
    CHECK(all_row.at(static_cast<std::uint32_t>(all_vocab.width() - 1)) == 2);  // loc

    auto noloc_vocab = Vocabulary::build(corpus, AblationConfig::NoLinesOfCode);
    auto noloc_row =
        to_row(vectorize(t, noloc_vocab, AblationConfig::NoLinesOfCode), noloc_vocab);
    CHECK(noloc_vocab.width() == all_vocab.width() - 1);
    // the trailing column is now keyword_total, not loc
    const auto kw = count_java_keywords(body);
    CHECK(noloc_row.at(static_cast<std::uint32_t>(noloc_vocab.width() - 1)) == kw.total);

    auto nokw_vocab = Vocabulary::build(corpus, AblationConfig::NoJavaKeywords);
    CHECK(nokw_vocab.width() == nokw_vocab.token_count() + 1);

    auto noid_vocab = Vocabulary::build(corpus, AblationConfig::NoIdentifiers);
    auto noid_row =
        to_row(vectorize(t, noid_vocab, AblationConfig::NoIdentifiers), noid_vocab);
    CHECK(noid_vocab.width() == 58);
    CHECK(noid_row.at(keyword_slot("public")) == 1);
}

TEST_CASE("keyword_total always equals the sum of keyword counts") {
    std::mt19937 rng(23);
    const char* snippets[] = {"public", "void", "int x;", "if (true)", "return 1;",
                              "new Foo()", "publicity", "throws IOException",
                              "for (;;)", "synchronized(this)"};
    for (int trial = 0; trial < 100; ++trial) {
        std::string body;
        const int len = static_cast<int>(rng() % 12);
        for (int j = 0; j < len; ++j) {
            body += snippets[rng() % 10];
            body += (rng() % 4 == 0) ? "\n" : " ";
        }
        auto kw = count_java_keywords(body);
        std::int64_t sum = 0;
        for (auto c : kw.counts) sum += c;
        CHECK(sum == kw.total);
    }
}

TEST_CASE("token counts never exceed the pipeline token count") {
    std::mt19937 rng(29);
    auto corpus = two_body_corpus("coordJob.getStatus(); job table id",
                                  "assertEquals(result, expected);");
    auto vocab = Vocabulary::build(corpus, AblationConfig::AllFeatures);
    const char* bodies[] = {"job table id", "coordJob", "unrelated.tokens(here)",
                            "job job job job", ""};
    for (const char* body : bodies) {
        TestCase t{"p", "T.x", body, Label::Unknown};
        if (std::string(body).empty()) continue;
        auto fv = vectorize(t, vocab, AblationConfig::AllFeatures);
        std::int64_t counted = 0;
        for (const auto& [col, n] : fv.token_counts) counted += n;
        const auto produced =
            run_pipeline(apply_ablation(AblationConfig::AllFeatures).pipeline, body);
        CHECK(counted <= static_cast<std::int64_t>(produced.size()));
    }
}
