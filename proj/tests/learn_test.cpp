#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "flakelex/error.hpp"
#include "flakelex/learn.hpp"

using namespace flakelex;

namespace {

constexpr Label F = Label::Flaky;
constexpr Label N = Label::NonFlaky;

FeatureMatrix make_matrix(const std::vector<std::vector<double>>& dense) {
    FeatureMatrix m;
    m.width = dense.empty() ? 0 : dense[0].size();
    for (const auto& row : dense) {
        SparseRow r;
        for (std::uint32_t c = 0; c < row.size(); ++c)
            if (row[c] != 0.0) r.entries.emplace_back(c, row[c]);
        m.rows.push_back(std::move(r));
    }
    return m;
}

// deterministic standard normal via Box-Muller on raw 64-bit draws
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        const double u1 =
            (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 =
            (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 rng_;
};

struct Blobs {
    FeatureMatrix train, test;
    std::vector<Label> train_y, test_y;
};

// two 2-d blobs, centers (0,0) and (6,6), unit variance, 100 points each,
// 70/30 train/test per class
Blobs make_blobs(std::uint64_t seed) {
    Gaussian g(seed);
    std::vector<std::vector<double>> train_rows, test_rows;
    Blobs blobs;
    for (int cls = 0; cls < 2; ++cls) {
        const double center = cls == 0 ? 6.0 : 0.0;
        const Label label = cls == 0 ? F : N;
        for (int i = 0; i < 100; ++i) {
            std::vector<double> row{center + g(), center + g()};
            if (i < 70) {
                train_rows.push_back(std::move(row));
                blobs.train_y.push_back(label);
            } else {
                test_rows.push_back(std::move(row));
                blobs.test_y.push_back(label);
            }
        }
    }
    blobs.train = make_matrix(train_rows);
    blobs.test = make_matrix(test_rows);
    return blobs;
}

ClassifierSpec spec_of(ClassifierKind kind, std::uint64_t seed = 42) {
    return ClassifierSpec{kind, seed, {}};
}

}  // namespace

TEST_CASE("classifier id round trip") {
    for (auto kind : all_classifiers()) CHECK(parse_classifier(classifier_id(kind)) == kind);
    CHECK_FALSE(parse_classifier("boosted-stump").has_value());
}

TEST_CASE("every classifier separates two well-separated points") {
    const auto X = make_matrix({{0.0}, {10.0}});
    const std::vector<Label> y{N, F};
    for (auto kind : all_classifiers()) {
        CAPTURE(classifier_id(kind));
        auto model = train(spec_of(kind), X, y);
        auto preds = model.predict_batch(X);
        CHECK(preds[0].label == N);
        CHECK(preds[1].label == F);
        // score/label coupling
        CHECK((preds[0].score >= model.threshold()) == (preds[0].label == F));
        CHECK((preds[1].score >= model.threshold()) == (preds[1].label == F));
    }
}

TEST_CASE("training rejects bad inputs") {
    const auto X = make_matrix({{0.0}, {1.0}});
    CHECK_THROWS_AS(train(spec_of(ClassifierKind::DecisionTree), X,
                          std::vector<Label>{F, F}),
                    SingleClassTraining);
    CHECK_THROWS_AS(train(spec_of(ClassifierKind::DecisionTree), X,
                          std::vector<Label>{F}),
                    DimensionMismatch);
    CHECK_THROWS_AS(train(spec_of(ClassifierKind::DecisionTree), X,
                          std::vector<Label>{F, Label::Unknown}),
                    SingleClassTraining);
}

TEST_CASE("prediction rejects mismatched widths") {
    const auto X = make_matrix({{0.0, 1.0}, {1.0, 0.0}});
    auto model = train(spec_of(ClassifierKind::NaiveBayes), X, std::vector<Label>{F, N});
    const auto wrong = make_matrix({{1.0, 2.0, 3.0}});
    CHECK_THROWS_AS(model.score_batch(wrong), DimensionMismatch);
}

TEST_CASE("perceptron converges on linearly separable data") {
    const auto X = make_matrix({{0.0, 1.0}, {0.5, 1.5}, {4.0, 5.0}, {5.0, 4.0}});
    const std::vector<Label> y{N, N, F, F};
    auto model = train(spec_of(ClassifierKind::Perceptron), X, y);
    CHECK(model.training_info().converged);
    auto preds = model.predict_batch(X);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(preds[i].label == y[i]);
}

TEST_CASE("memorizing learners reproduce training labels") {
    Gaussian g(7);
    std::vector<std::vector<double>> rows;
    std::vector<Label> y;
    for (int i = 0; i < 24; ++i) {
        rows.push_back({g() * 3.0, g() * 3.0, g() * 3.0});
        y.push_back(i % 2 ? F : N);
    }
    const auto X = make_matrix(rows);
    for (auto kind : {ClassifierKind::NearestNeighbour, ClassifierKind::DecisionTree}) {
        CAPTURE(classifier_id(kind));
        auto model = train(spec_of(kind), X, y);
        auto preds = model.predict_batch(X);
        for (std::size_t i = 0; i < y.size(); ++i) CHECK(preds[i].label == y[i]);
    }
}

TEST_CASE("score ranges per classifier family") {
    auto blobs = make_blobs(1001);
    for (auto kind : {ClassifierKind::RandomForest, ClassifierKind::DecisionTree,
                      ClassifierKind::NaiveBayes, ClassifierKind::LogisticRegression,
                      ClassifierKind::NearestNeighbour}) {
        CAPTURE(classifier_id(kind));
        auto model = train(spec_of(kind), blobs.train, blobs.train_y);
        CHECK(model.threshold() == 0.5);
        for (double s : model.score_batch(blobs.test)) {
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
    }
    for (auto kind : {ClassifierKind::LinearSVM, ClassifierKind::Perceptron,
                      ClassifierKind::LinearDiscriminant}) {
        auto model = train(spec_of(kind), blobs.train, blobs.train_y);
        CHECK(model.threshold() == 0.0);
    }
}

TEST_CASE("nearest neighbour score is the flaky fraction of the neighbourhood") {
    const auto X = make_matrix({{0.0, 0.0}, {10.0, 10.0}});
    auto model = train(spec_of(ClassifierKind::NearestNeighbour), X,
                       std::vector<Label>{N, F});
    const auto probe = make_matrix({{9.0, 9.0}, {1.0, 1.0}});
    auto scores = model.score_batch(probe);
    CHECK(scores[0] == 1.0);
    CHECK(scores[1] == 0.0);
}

TEST_CASE("naive Bayes posterior matches the direct Bayes rule on exhaustive 4-point sets") {
    // every 4-point dataset over {0,1}^2 with both classes present
    const double corners[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const double floor_ = Hyperparameters{}.nb_variance_floor;
    int checked = 0;
    for (int assignment = 0; assignment < 256; ++assignment) {
        int idx[4] = {assignment & 3, (assignment >> 2) & 3, (assignment >> 4) & 3,
                      (assignment >> 6) & 3};
        for (int labels = 1; labels < 15; ++labels) {  // skip the single-class patterns
            std::vector<std::vector<double>> rows;
            std::vector<Label> y;
            for (int i = 0; i < 4; ++i) {
                rows.push_back({corners[idx[i]][0], corners[idx[i]][1]});
                y.push_back((labels >> i) & 1 ? F : N);
            }
            auto model = train(spec_of(ClassifierKind::NaiveBayes), make_matrix(rows),
                               y);

            // direct dense estimate: class priors + per-feature moments
            double mean[2][2] = {}, var[2][2] = {}, count[2] = {};
            for (int i = 0; i < 4; ++i) {
                const int c = y[i] == F ? 0 : 1;
                count[c] += 1.0;
                for (int f = 0; f < 2; ++f) mean[c][f] += rows[i][f];
            }
            for (int c = 0; c < 2; ++c)
                for (int f = 0; f < 2; ++f) mean[c][f] /= count[c];
            for (int i = 0; i < 4; ++i) {
                const int c = y[i] == F ? 0 : 1;
                for (int f = 0; f < 2; ++f) {
                    const double d = rows[i][f] - mean[c][f];
                    var[c][f] += d * d;
                }
            }
            for (int c = 0; c < 2; ++c)
                for (int f = 0; f < 2; ++f)
                    var[c][f] = std::max(floor_, var[c][f] / count[c]);

            auto density = [&](int c, const double* x) {
                double p = count[c] / 4.0;
                for (int f = 0; f < 2; ++f)
                    p *= std::exp(-(x[f] - mean[c][f]) * (x[f] - mean[c][f]) /
                                  (2.0 * var[c][f])) /
                         std::sqrt(2.0 * 3.141592653589793 * var[c][f]);
                return p;
            };

            auto scores = model.score_batch(make_matrix(rows));
            for (int i = 0; i < 4; ++i) {
                const double pf = density(0, rows[i].data());
                const double pn = density(1, rows[i].data());
                const double expected = pf / (pf + pn);
                // the variance floor pushes log densities to ~1e9, so the
                // log-domain path agrees to ~1e-7 relative, not machine eps
                CHECK(scores[i] == doctest::Approx(expected).epsilon(1e-6));
            }
            ++checked;
        }
    }
    CHECK(checked == 256 * 14);
}

TEST_CASE("1-NN agrees with brute-force nearest neighbour search") {
    std::mt19937_64 seeds(55);
    for (int trial = 0; trial < 20; ++trial) {
        Gaussian g(seeds());
        std::vector<std::vector<double>> rows;
        std::vector<Label> y;
        for (int i = 0; i < 20; ++i) {
            rows.push_back({g(), g(), g()});
            y.push_back(i % 3 == 0 ? F : N);
        }
        auto model = train(spec_of(ClassifierKind::NearestNeighbour),
                           make_matrix(rows), y);
        for (int q = 0; q < 10; ++q) {
            std::vector<double> probe{g(), g(), g()};
            std::size_t nearest = 0;
            double best = 1e300;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                double d = 0.0;
                for (int f = 0; f < 3; ++f)
                    d += (rows[i][f] - probe[f]) * (rows[i][f] - probe[f]);
                if (d < best) {
                    best = d;
                    nearest = i;
                }
            }
            auto pred = model.predict_batch(make_matrix({probe}))[0];
            CHECK(pred.label == y[nearest]);
        }
    }
}

TEST_CASE("all eight classifiers reach 0.95 held-out accuracy on separated blobs") {
    auto blobs = make_blobs(20240401);
    for (auto kind : all_classifiers()) {
        CAPTURE(classifier_id(kind));
        auto model = train(spec_of(kind), blobs.train, blobs.train_y);
        auto preds = model.predict_batch(blobs.test);
        int correct = 0;
        for (std::size_t i = 0; i < preds.size(); ++i)
            if (preds[i].label == blobs.test_y[i]) ++correct;
        CHECK(static_cast<double>(correct) / static_cast<double>(preds.size()) >= 0.95);
    }
}

TEST_CASE("training is deterministic for a fixed seed") {
    auto blobs = make_blobs(3);
    for (auto kind : all_classifiers()) {
        CAPTURE(classifier_id(kind));
        auto a = train(spec_of(kind, 7), blobs.train, blobs.train_y);
        auto b = train(spec_of(kind, 7), blobs.train, blobs.train_y);
        CHECK(a.score_batch(blobs.test) == b.score_batch(blobs.test));
    }
}

TEST_CASE("training is invariant under permuting the training rows") {
    auto blobs = make_blobs(9);
    std::vector<std::size_t> perm(blobs.train.rows.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::mt19937_64 rng(4);
    std::shuffle(perm.begin(), perm.end(), rng);

    FeatureMatrix shuffled;
    shuffled.width = blobs.train.width;
    std::vector<Label> shuffled_y;
    for (auto i : perm) {
        shuffled.rows.push_back(blobs.train.rows[i]);
        shuffled_y.push_back(blobs.train_y[i]);
    }

    for (auto kind : all_classifiers()) {
        CAPTURE(classifier_id(kind));
        auto a = train(spec_of(kind, 11), blobs.train, blobs.train_y);
        auto b = train(spec_of(kind, 11), shuffled, shuffled_y);
        CHECK(a.score_batch(blobs.test) == b.score_batch(blobs.test));
    }
}

TEST_CASE("sorting a batch by score separates the predicted labels") {
    auto blobs = make_blobs(12);
    for (auto kind : all_classifiers()) {
        auto model = train(spec_of(kind), blobs.train, blobs.train_y);
        auto preds = model.predict_batch(blobs.test);
        std::sort(preds.begin(), preds.end(),
                  [](const Prediction& a, const Prediction& b) { return a.score < b.score; });
        bool seen_flaky = false;
        for (const auto& p : preds) {
            if (p.label == F) seen_flaky = true;
            else CHECK_FALSE(seen_flaky);  // non-flaky never follows flaky
        }
    }
}

TEST_CASE("models reload bit-exactly") {
    auto blobs = make_blobs(21);
    const auto dir = std::filesystem::temp_directory_path();
    for (auto kind : all_classifiers()) {
        CAPTURE(classifier_id(kind));
        auto model = train(spec_of(kind, 13), blobs.train, blobs.train_y);
        const auto path = dir / ("flakelex_model_" +
                                 std::string(classifier_id(kind)) + ".flx");
        model.save(path);
        auto loaded = TrainedModel::load(path);
        CHECK(loaded.model.spec().kind == kind);
        CHECK(loaded.model.spec().seed == 13);
        CHECK(loaded.model.score_batch(blobs.test) == model.score_batch(blobs.test));
        CHECK_FALSE(loaded.vocabulary.has_value());
    }
}

TEST_CASE("iterative learners report their iteration counts") {
    auto blobs = make_blobs(33);
    for (auto kind : {ClassifierKind::LogisticRegression, ClassifierKind::LinearSVM,
                      ClassifierKind::Perceptron, ClassifierKind::LinearDiscriminant}) {
        auto model = train(spec_of(kind), blobs.train, blobs.train_y);
        CHECK(model.training_info().iterations > 0);
    }
}
