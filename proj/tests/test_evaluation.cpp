#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "occ/evaluation.hpp"
#include "occ/experiments.hpp"
#include "occ/rand.hpp"
#include "testutil.hpp"

using namespace occ;

TEST_CASE("confusion metrics") {
    SUBCASE("perfect classifier") {
        const auto m = confusion_metrics({.tp = 82, .fp = 0, .tn = 500, .fn = 0});
        CHECK(m.accuracy == 1.0);
        CHECK(m.fpr == 0.0);
        CHECK(m.recall == 1.0);
        CHECK_FALSE(m.degenerate);
    }
    SUBCASE("hand-computed mixed counts") {
        const auto m = confusion_metrics({.tp = 2, .fp = 1, .tn = 6, .fn = 1});
        CHECK(m.recall == doctest::Approx(2.0 / 3.0));
        CHECK(m.fpr == doctest::Approx(1.0 / 7.0));
        CHECK(m.accuracy == doctest::Approx(0.8));
        CHECK(m.precision == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("0/0 ratios pin to zero and set the flag") {
        const auto m = confusion_metrics({.tp = 0, .fp = 0, .tn = 5, .fn = 2});
        CHECK(m.precision == 0.0);
        CHECK(m.degenerate);
    }
    SUBCASE("all-zero counts are an error") {
        CHECK_THROWS_AS(confusion_metrics({}), EvaluationError);
    }
    SUBCASE("counting from predictions") {
        const auto c = count_confusion({true, false, true, false}, {true, true, false, false});
        CHECK(c.tp == 1);
        CHECK(c.fn == 1);
        CHECK(c.fp == 1);
        CHECK(c.tn == 1);
    }
}

TEST_CASE("roc auc") {
    SUBCASE("separable scores give 1") {
        const auto r = roc_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, {true, true, false, false});
        CHECK(r.auc == 1.0);
    }
    SUBCASE("identical scores give one half") {
        const auto r = roc_auc(std::vector<double>{0.4, 0.4, 0.4}, {true, false, true});
        CHECK(r.auc == 0.5);
    }
    SUBCASE("hand-computed pair counting") {
        const auto r = roc_auc(std::vector<double>{0.9, 0.4, 0.6, 0.1}, {true, true, false, false});
        CHECK(r.auc == doctest::Approx(0.75));
    }
    SUBCASE("single-class input is an error") {
        CHECK_THROWS_AS(roc_auc(std::vector<double>{0.5, 0.6}, {true, true}), EvaluationError);
    }
    SUBCASE("curve runs from (0,0) to (1,1) and is monotone") {
        Rng rng(61);
        std::vector<double> scores(40);
        std::vector<bool> labels(40);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            scores[i] = static_cast<double>(rng.uniform_index(8));   // force ties
            labels[i] = i % 3 != 0;
        }
        const auto r = roc_auc(scores, labels);
        CHECK(r.points.front() == std::array<double, 2>{0.0, 0.0});
        CHECK(r.points.back() == std::array<double, 2>{1.0, 1.0});
        for (std::size_t i = 1; i < r.points.size(); ++i) {
            CHECK(r.points[i][0] >= r.points[i - 1][0]);
            CHECK(r.points[i][1] >= r.points[i - 1][1]);
        }
    }
    SUBCASE("matches brute-force pair counting on random score sets") {
        Rng rng(67);
        for (int trial = 0; trial < 500; ++trial) {
            const std::size_t n = 2 + rng.uniform_index(19);
            std::vector<double> scores(n);
            std::vector<bool> labels(n);
            bool pos = false, neg = false;
            for (std::size_t i = 0; i < n; ++i) {
                scores[i] = static_cast<double>(rng.uniform_index(6)) / 5.0;   // tied values likely
                labels[i] = rng.next() & 1;
                (labels[i] ? pos : neg) = true;
            }
            if (!pos || !neg) continue;
            CHECK(roc_auc(scores, labels).auc ==
                  doctest::Approx(testutil::auc_brute(scores, labels)).epsilon(1e-12));
        }
    }
    SUBCASE("invariant under strictly increasing score transforms") {
        Rng rng(71);
        std::vector<double> scores(30);
        std::vector<bool> labels(30);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            scores[i] = rng.uniform();
            labels[i] = rng.next() & 1;
        }
        labels[0] = true;
        labels[1] = false;
        const double base = roc_auc(scores, labels).auc;
        std::vector<double> cubed(scores), expd(scores);
        for (auto& v : cubed) v = v * v * v;
        for (auto& v : expd) v = std::exp(v);
        CHECK(roc_auc(cubed, labels).auc == base);
        CHECK(roc_auc(expd, labels).auc == base);
    }
}

TEST_CASE("weight entropy") {
    SUBCASE("all weights in one bin") {
        CHECK(weight_entropy(std::vector<double>{0.42, 0.43, 0.44}) == 0.0);
    }
    SUBCASE("uniformly filled bins reach ln 10") {
        std::vector<double> w;
        for (int b = 0; b < 10; ++b) w.push_back(0.05 + 0.1 * b);
        CHECK(weight_entropy(w) == doctest::Approx(std::log(10.0)));
    }
    SUBCASE("three singly-occupied bins give ln 3") {
        CHECK(weight_entropy(std::vector<double>{0.05, 0.15, 0.95}) ==
              doctest::Approx(std::log(3.0)));
    }
    SUBCASE("needs at least two weights") {
        CHECK_THROWS_AS(weight_entropy(std::vector<double>{0.5}), EvaluationError);
    }
    SUBCASE("boundary value 1.0 lands in the top bin") {
        CHECK(weight_entropy(std::vector<double>{1.0, 0.95}) == 0.0);
    }
    SUBCASE("density curve is a non-negative grid over [0,1]") {
        const auto curve = weight_density_curve(std::vector<double>{0.2, 0.25, 0.8}, 51);
        CHECK(curve.size() == 51);
        CHECK(curve.front()[0] == 0.0);
        CHECK(curve.back()[0] == 1.0);
        double peak_near_data = 0.0, valley = 0.0;
        for (const auto& [x, d] : curve) {
            CHECK(d >= 0.0);
            if (std::fabs(x - 0.22) < 0.06) peak_near_data = std::max(peak_near_data, d);
            if (std::fabs(x - 0.55) < 0.06) valley = std::max(valley, d);
        }
        CHECK(peak_near_data > valley);
    }
}

TEST_CASE("mutual information") {
    Rng rng(73);
    std::vector<double> xs(1000);
    for (auto& v : xs) v = rng.uniform();

    SUBCASE("self-information normalizes to 1") {
        CHECK(mutual_information(xs, xs) == doctest::Approx(1.0));
    }
    SUBCASE("constant series has zero marginal entropy") {
        const std::vector<double> c(xs.size(), 3.0);
        CHECK(mutual_information(c, xs) == 0.0);
    }
    SUBCASE("independent samples stay small") {
        std::vector<double> ys(xs.size());
        for (auto& v : ys) v = rng.uniform();
        CHECK(mutual_information(xs, ys) < 0.1);
    }
    SUBCASE("symmetric in its arguments") {
        std::vector<double> ys(xs.size());
        for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = std::sin(7.0 * xs[i]) + 0.1 * rng.uniform();
        CHECK(mutual_information(xs, ys) == doctest::Approx(mutual_information(ys, xs)));
        CHECK(mutual_information(xs, ys) >= 0.0);
        CHECK(mutual_information(xs, ys) <= 1.0);
    }
    SUBCASE("length mismatch and short input are errors") {
        CHECK_THROWS_AS(mutual_information(xs, std::vector<double>{1, 2, 3}), EvaluationError);
        const std::vector<double> tiny{1, 2, 3};
        CHECK_THROWS_AS(mutual_information(tiny, tiny), EvaluationError);
    }
}

TEST_CASE("pearson correlation") {
    const std::vector<double> xs{1, 2, 3};
    SUBCASE("linear relations") {
        const std::vector<double> twice{2, 4, 6}, neg{-1, -2, -3};
        CHECK(pearson_correlation(xs, twice) == doctest::Approx(1.0));
        CHECK(pearson_correlation(xs, neg) == doctest::Approx(-1.0));
    }
    SUBCASE("hand-computed value") {
        const std::vector<double> ys{1, 3, 2};
        CHECK(pearson_correlation(xs, ys) == doctest::Approx(0.5));
    }
    SUBCASE("constant series is an error") {
        const std::vector<double> c{2, 2, 2};
        CHECK_THROWS_AS(pearson_correlation(xs, c), EvaluationError);
    }
}

TEST_CASE("dissimilarity embedding") {
    SUBCASE("zero matrix maps to the origin") {
        const std::vector<std::vector<double>> d(4, std::vector<double>(4, 0.0));
        for (const auto& c : embed_dissimilarity(d)) {
            CHECK(c[0] == 0.0);
            CHECK(c[1] == 0.0);
        }
    }
    SUBCASE("duplicated rows land on the same point") {
        // Two groups of identical patterns: identical matrix rows.
        Rng rng(79);
        const double ab = rng.uniform(0.5, 1.0);
        std::vector<std::vector<double>> d(6, std::vector<double>(6, 0.0));
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                d[i][j] = (i / 3 == j / 3) ? 0.0 : ab;
        const auto coords = embed_dissimilarity(d);
        for (int g = 0; g < 2; ++g)
            for (int i = 1; i < 3; ++i) {
                CHECK(coords[3 * g + i][0] == doctest::Approx(coords[3 * g][0]));
                CHECK(coords[3 * g + i][1] == doctest::Approx(coords[3 * g][1]));
            }
    }
    SUBCASE("rank-2 inputs reconstruct the centered Gram structure") {
        Rng rng(83);
        const std::size_t n = 12;
        std::vector<double> p(n), q(n), r(n), s(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.uniform(-1, 1);
            q[i] = rng.uniform(-1, 1);
            r[i] = rng.uniform(-1, 1);
            s[i] = rng.uniform(-1, 1);
        }
        std::vector<std::vector<double>> d(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = 5.0 * p[i] * q[j] + 2.0 * r[i] * s[j];

        const auto coords = embed_dissimilarity(d);

        // Column-center d, then compare Gram matrices.
        std::vector<double> mean(n, 0.0);
        for (const auto& row : d)
            for (std::size_t j = 0; j < n; ++j) mean[j] += row[j] / n;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                double gram = 0.0, approx = 0.0;
                for (std::size_t c = 0; c < n; ++c)
                    gram += (d[i][c] - mean[c]) * (d[j][c] - mean[c]);
                approx = coords[i][0] * coords[j][0] + coords[i][1] * coords[j][1];
                CHECK(std::fabs(gram - approx) < 1e-9);
            }
        }
    }
    SUBCASE("column centering makes constant shifts vanish") {
        Rng rng(89);
        std::vector<std::vector<double>> d(8, std::vector<double>(8, 0.0));
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = i + 1; j < 8; ++j) d[i][j] = d[j][i] = rng.uniform(0.0, 2.0);
        auto shifted = d;
        for (auto& row : shifted)
            for (auto& v : row) v += 17.5;
        const auto a = embed_dissimilarity(d);
        const auto b = embed_dissimilarity(shifted);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(a[i][0] == doctest::Approx(b[i][0]).epsilon(1e-9));
            CHECK(a[i][1] == doctest::Approx(b[i][1]).epsilon(1e-9));
        }
    }
    SUBCASE("non-square input is an error") {
        CHECK_THROWS_AS(embed_dissimilarity({{0.0, 1.0}}), EvaluationError);
    }
}

TEST_CASE("implicit-fpr experiment rejects degenerate ratio lists") {
    const ImplicitFprConfig cfg;
    const std::vector<double> single{0.1};
    CHECK_THROWS_AS(run_implicit_fpr_experiment(single, cfg, 1), EvaluationError);
    const std::vector<double> bad{0.1, -0.2};
    CHECK_THROWS_AS(run_implicit_fpr_experiment(bad, cfg, 1), EvaluationError);
}
