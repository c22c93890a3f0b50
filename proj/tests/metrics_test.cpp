#include <doctest.h>

#include <cmath>
#include <random>

#include "flakelex/error.hpp"
#include "flakelex/metrics.hpp"

using namespace flakelex;

namespace {

// O(n^2) pairwise AUC: wins + half-ties over all (flaky, non-flaky) pairs.
double auc_bruteforce(const std::vector<double>& scores,
                      const std::vector<Label>& truth) {
    double wins = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] != Label::Flaky) continue;
        for (std::size_t j = 0; j < truth.size(); ++j) {
            if (truth[j] != Label::NonFlaky) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

constexpr Label F = Label::Flaky;
constexpr Label N = Label::NonFlaky;

}  // namespace

TEST_CASE("confusion counts the four cells") {
    const std::vector<Label> preds{F, F, N};
    CHECK(confusion(preds, preds).tp == 2);
    CHECK(confusion(preds, preds).tn == 1);
    CHECK(confusion(preds, preds).fp == 0);

    const std::vector<Label> all_n{N, N, N, N};
    const std::vector<Label> all_f{F, F, F, F};
    auto cm = confusion(all_n, all_f);
    CHECK(cm.fn == 4);
    CHECK(cm.total() == 4);

    CHECK_THROWS_AS(confusion({}, {}), LengthMismatch);
    CHECK_THROWS_AS(confusion(all_n, preds), LengthMismatch);
}

TEST_CASE("precision, recall, f1 formulas") {
    ConfusionMatrix cm{3, 1, 0, 0};
    CHECK(precision(cm).value == doctest::Approx(0.75));

    ConfusionMatrix lda_like{60, 0, 20, 0};
    CHECK(recall(lda_like).value == doctest::Approx(0.75));

    ConfusionMatrix balanced{9, 1, 1, 9};
    CHECK(precision(balanced).value == doctest::Approx(0.9));
    CHECK(recall(balanced).value == doctest::Approx(0.9));
    CHECK(f1(balanced).value == doctest::Approx(0.9));
}

TEST_CASE("zero denominators flag the value as undefined") {
    ConfusionMatrix nothing_predicted{0, 0, 4, 6};
    CHECK_FALSE(precision(nothing_predicted).defined);
    CHECK(precision(nothing_predicted).value == 0.0);

    ConfusionMatrix no_positives{0, 2, 0, 8};
    CHECK_FALSE(recall(no_positives).defined);
    CHECK_FALSE(mcc(no_positives).defined);
}

TEST_CASE("mcc formula and symmetry") {
    ConfusionMatrix perfect{5, 0, 0, 7};
    CHECK(mcc(perfect).value == doctest::Approx(1.0));

    ConfusionMatrix inverted{0, 7, 5, 0};
    CHECK(mcc(inverted).value == doctest::Approx(-1.0));

    ConfusionMatrix cm{9, 1, 1, 9};
    CHECK(mcc(cm).value == doctest::Approx(0.8));  // (81-1)/sqrt(10^4)
}

TEST_CASE("mcc is invariant under swapping both classes") {
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        ConfusionMatrix cm{static_cast<std::int64_t>(rng() % 20),
                           static_cast<std::int64_t>(rng() % 20),
                           static_cast<std::int64_t>(rng() % 20),
                           static_cast<std::int64_t>(rng() % 20)};
        ConfusionMatrix swapped{cm.tn, cm.fn, cm.fp, cm.tp};
        auto a = mcc(cm);
        auto b = mcc(swapped);
        CHECK(a.defined == b.defined);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
    }
}

TEST_CASE("f1 lies between precision and recall when both are nonzero") {
    std::mt19937 rng(31);
    for (int i = 0; i < 200; ++i) {
        ConfusionMatrix cm{1 + static_cast<std::int64_t>(rng() % 20),
                           static_cast<std::int64_t>(rng() % 20),
                           static_cast<std::int64_t>(rng() % 20),
                           static_cast<std::int64_t>(rng() % 20)};
        const double p = precision(cm).value;
        const double r = recall(cm).value;
        if (p == 0.0 || r == 0.0) continue;
        const double f = f1(cm).value;
        CHECK(f <= std::max(p, r) + 1e-15);
        CHECK(f >= std::min(p, r) - 1e-15);
    }
}

TEST_CASE("auc on the pinned examples") {
    CHECK(auc(std::vector<double>{0.9, 0.8, 0.1}, std::vector<Label>{F, F, N}) ==
          doctest::Approx(1.0));
    CHECK(auc(std::vector<double>{0.4, 0.4, 0.4, 0.4},
              std::vector<Label>{F, N, F, N}) == doctest::Approx(0.5));
    // pairs: (.8,.5) win, (.8,.1) win, (.3,.5) loss, (.3,.1) win -> 3/4
    CHECK(auc(std::vector<double>{0.8, 0.3, 0.5, 0.1},
              std::vector<Label>{F, F, N, N}) == doctest::Approx(0.75));
}

TEST_CASE("auc requires both classes") {
    CHECK_THROWS_AS(auc(std::vector<double>{0.5, 0.2}, std::vector<Label>{F, F}),
                    SingleClassAUC);
}

TEST_CASE("auc matches the pairwise oracle on 1000 seeded instances") {
    std::mt19937_64 rng(4242);
    for (int instance = 0; instance < 1000; ++instance) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<double> scores(n);
        std::vector<Label> truth(n);
        bool seen[2] = {false, false};
        for (std::size_t i = 0; i < n; ++i) {
            // coarse grid so ties actually happen
            scores[i] = static_cast<double>(rng() % 16) / 8.0;
            truth[i] = (rng() & 1) ? F : N;
            seen[truth[i] == F ? 0 : 1] = true;
        }
        if (!seen[0]) truth[0] = F;
        if (!seen[1]) truth[n - 1] = N;
        const double fast = auc(scores, truth);
        const double slow = auc_bruteforce(scores, truth);
        CHECK(std::abs(fast - slow) <= 1e-12);
    }
}

TEST_CASE("auc of negated scores complements to one without ties") {
    std::mt19937_64 rng(99);
    for (int instance = 0; instance < 50; ++instance) {
        const std::size_t n = 4 + rng() % 40;
        std::vector<double> scores(n);
        std::vector<Label> truth(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng()) / 1e19 + static_cast<double>(i) * 1e-6;
            truth[i] = (rng() & 1) ? F : N;
        }
        truth[0] = F;
        truth[n - 1] = N;
        std::vector<double> negated(n);
        for (std::size_t i = 0; i < n; ++i) negated[i] = -scores[i];
        CHECK(auc(scores, truth) + auc(negated, truth) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
