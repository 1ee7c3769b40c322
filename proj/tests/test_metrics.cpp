#include "gu/metrics.hpp"

#include "gu/error.hpp"
#include "gu/rng.hpp"

#include <doctest.h>

using namespace gu;

namespace {

// independent oracle: all positive/negative pairs compared one by one
double auc_bruteforce(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

} // namespace

TEST_CASE("f1 basics") {
    CHECK(f1({0, 1, 1}, {0, 1, 1}, F1Mode::Micro) == doctest::Approx(1.0));
    CHECK(f1({0, 1, 1}, {0, 1, 1}, F1Mode::Macro) == doctest::Approx(1.0));
    // hand confusion matrix: class0 F1 = 2/3, class1 F1 = 4/5
    CHECK(f1({0, 1, 1, 1}, {0, 0, 1, 1}, F1Mode::Macro) ==
          doctest::Approx((2.0 / 3.0 + 4.0 / 5.0) / 2.0));
    CHECK_THROWS_AS(f1({0}, {0, 1}, F1Mode::Micro), Error);
}

TEST_CASE("micro f1 equals accuracy on single-label multiclass input") {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 1 + rng.uniform_int(60);
        int classes = 2 + static_cast<int>(rng.uniform_int(5));
        std::vector<int> labels(n), preds(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<int>(rng.uniform_int(classes));
            preds[i] = static_cast<int>(rng.uniform_int(classes));
        }
        CHECK(f1(preds, labels, F1Mode::Micro) == doctest::Approx(accuracy(preds, labels)));
    }
}

TEST_CASE("auc basics") {
    CHECK(auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(auc({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}) == doctest::Approx(0.5));
    CHECK(auc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}) == doctest::Approx(0.75));
    CHECK_THROWS_WITH_AS(auc({0.1, 0.2}, {1, 1}), doctest::Contains("SingleClass"), Error);
}

TEST_CASE("auc matches the brute-force pairwise oracle") {
    Rng rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 2 + rng.uniform_int(49);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            // coarse grid forces plenty of ties
            scores[i] = static_cast<double>(rng.uniform_int(8)) / 8.0;
            labels[i] = static_cast<int>(rng.uniform_int(2));
            (labels[i] ? has_pos : has_neg) = true;
        }
        if (!has_pos) labels[0] = 1;
        if (!has_neg) labels[n - 1] = 0;
        double fast = auc(scores, labels);
        double slow = auc_bruteforce(scores, labels);
        CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
    }
}

TEST_CASE("auc is invariant under strictly monotone transforms") {
    Rng rng(7);
    std::vector<double> scores(40);
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i] = rng.uniform();
        labels[i] = static_cast<int>(rng.uniform_int(2));
    }
    labels[0] = 1;
    labels[1] = 0;
    std::vector<double> squashed(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        squashed[i] = 1.0 / (1.0 + std::exp(-5.0 * scores[i]));
    CHECK(auc(scores, labels) == doctest::Approx(auc(squashed, labels)).epsilon(1e-12));
}

TEST_CASE("accuracy and precision") {
    CHECK(accuracy({0, 0, 1}, {0, 1, 1}) == doctest::Approx(2.0 / 3.0));
    PrecisionResult p = precision({0, 0, 0}, {0, 1, 1}, 1);
    CHECK(p.no_predictions);
    CHECK(p.value == 0.0);
    PrecisionResult q = precision({1, 1, 0}, {1, 0, 0}, 1);
    CHECK(!q.no_predictions);
    CHECK(q.value == doctest::Approx(0.5));
}
