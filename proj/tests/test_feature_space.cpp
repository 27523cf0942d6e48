#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "occ/feature_space.hpp"
#include "occ/rand.hpp"
#include "testutil.hpp"

using namespace occ;

TEST_CASE("schema validation") {
    CHECK_THROWS_AS(FeatureSchema(std::vector<FeatureDescriptor>{}), SchemaError);
    CHECK_THROWS_AS(FeatureSchema({{.name = "a", .kind = FeatureKind::quantitative},
                                   {.name = "a", .kind = FeatureKind::quantitative}}),
                    SchemaError);
    CHECK_THROWS_AS(FeatureSchema({{.name = "c", .kind = FeatureKind::circular, .period = 0}}),
                    SchemaError);
    CHECK_THROWS_AS(FeatureSchema({{.name = "m", .kind = FeatureKind::categorical}}), SchemaError);

    const FeatureSchema s({{.name = "day", .kind = FeatureKind::circular, .period = 364},
                           {.name = "mat", .kind = FeatureKind::categorical, .domain = {"CU", "AL"}}});
    CHECK(s.arity() == 2);
    CHECK(s.indices_of(FeatureKind::circular) == std::vector<std::size_t>{0});
}

TEST_CASE("pattern validation catches arity and kind errors") {
    const FeatureSchema s({{.name = "q", .kind = FeatureKind::quantitative},
                           {.name = "mat", .kind = FeatureKind::categorical, .domain = {"CU", "AL"}}});
    CHECK_THROWS_AS(validate_pattern(s, Pattern{{0.5}}), SchemaError);
    CHECK_THROWS_AS(validate_pattern(s, Pattern{{0.5, 0.5}}), SchemaError);
    CHECK_THROWS_AS(validate_pattern(s, Pattern{{1.5, std::string("CU")}}), DomainError);
    CHECK_THROWS_AS(validate_pattern(s, Pattern{{0.5, std::string("FE")}}), DomainError);
    CHECK_NOTHROW(validate_pattern(s, Pattern{{0.5, std::string("CU")}}));
}

TEST_CASE("simple matching") {
    const std::vector<std::string> cu{"CU"}, al{"AL"};
    CHECK(simple_matching(cu, cu) == 0.0);
    CHECK(simple_matching(cu, al) == 1.0);
    const std::vector<std::string> x{"CU", "aerial"}, y{"AL", "aerial"};
    CHECK(simple_matching(x, y) == 0.5);
    CHECK_THROWS_AS(simple_matching(cu, x), SchemaError);
    CHECK_THROWS_AS(simple_matching({}, {}), SchemaError);
}

TEST_CASE("circular difference") {
    CHECK(circular_diff(10, 10, 1439) == 0.0);
    CHECK(circular_diff(0, 1430, 1439) == 9.0);
    CHECK(circular_diff(100, 200, 364) == 100.0);
    CHECK_THROWS_AS(circular_diff(-1, 0, 10), DomainError);
    CHECK_THROWS_AS(circular_diff(0, 11, 10), DomainError);

    // Exhaustive bound and symmetry for small periods.
    for (long a = 1; a <= 50; ++a)
        for (long x = 0; x <= a; ++x)
            for (long y = 0; y <= a; ++y) {
                const double d = circular_diff(x, y, a);
                CHECK(d == circular_diff(y, x, a));
                CHECK(d <= static_cast<double>(a) / 2.0);
                CHECK(d >= 0.0);
                if (x == y) CHECK(d == 0.0);
            }
}

TEST_CASE("special difference") {
    CHECK(special_diff(SpecialValue::na(), SpecialValue::na()) == 0.0);
    CHECK(special_diff(SpecialValue{0.3}, SpecialValue::na()) == 1.0);
    CHECK(special_diff(SpecialValue::na(), SpecialValue{0.3}) == 1.0);
    CHECK(special_diff(SpecialValue{0.2}, SpecialValue{0.5}) == doctest::Approx(0.3));
    CHECK_THROWS_AS(special_diff(SpecialValue{1.7}, SpecialValue{0.5}), DomainError);
}

TEST_CASE("dtw basics") {
    CHECK(dtw({5, 10, 20}, {5, 10, 20}) == 0.0);
    CHECK(dtw({1}, {2}) == 1.0);
    CHECK(dtw({1, 2, 3}, {1, 2, 2, 3}) == 0.0);
    CHECK(dtw({}, {}) == 0.0);
    CHECK(std::isinf(dtw({}, {1, 2})));
    CHECK(std::isinf(dtw({1, 2}, {})));
}

TEST_CASE("dtw equals brute-force path enumeration on short sequences") {
    Rng rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        EventSequence x(1 + rng.uniform_index(5)), y(1 + rng.uniform_index(5));
        for (auto& v : x) v = static_cast<double>(rng.uniform_index(10));
        for (auto& v : y) v = static_cast<double>(rng.uniform_index(10));
        const double got = dtw(x, y);
        const double want = testutil::dtw_brute(x, y);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(got == doctest::Approx(dtw(y, x)).epsilon(1e-12));
    }
}

namespace {

FeatureSchema ts_schema() {
    return FeatureSchema({{.name = "s", .kind = FeatureKind::timeseries}});
}

Pattern seq(EventSequence e) { return Pattern{{std::move(e)}}; }

}  // namespace

TEST_CASE("ts normalizer fit and clamp") {
    const FeatureSchema s = ts_schema();

    SUBCASE("identical sequences store sentinel 1") {
        const std::vector<Pattern> data{seq({1, 2}), seq({1, 2}), seq({1, 2})};
        const TsNormalizer norm = fit_ts_normalizer(s, data);
        CHECK(norm.max_raw.at(0) == 1.0);
        CHECK(composite_dissimilarity(s, data[0], data[1], std::vector<double>{1.0}, norm) == 0.0);
    }
    SUBCASE("max over the pairwise matrix; values divide through") {
        // dtw(a,b)=40, dtw(a,c)=20: max 40, normalized 1.0 and 0.5.
        const std::vector<Pattern> data{seq({0}), seq({40}), seq({20})};
        const TsNormalizer norm = fit_ts_normalizer(s, data);
        CHECK(norm.max_raw.at(0) == 40.0);
        CHECK(norm.normalized(0, 40.0) == 1.0);
        CHECK(norm.normalized(0, 20.0) == 0.5);
    }
    SUBCASE("single pattern stores sentinel") {
        CHECK(fit_ts_normalizer(s, {seq({3, 4})}).max_raw.at(0) == 1.0);
    }
    SUBCASE("values above the fitted max clamp to 1") {
        const std::vector<Pattern> data{seq({0}), seq({10})};
        const TsNormalizer norm = fit_ts_normalizer(s, data);
        CHECK(norm.normalized(0, 25.0) == 1.0);
    }
    SUBCASE("empty vs non-empty normalizes to 1") {
        const std::vector<Pattern> data{seq({}), seq({5, 6}), seq({7})};
        const TsNormalizer norm = fit_ts_normalizer(s, data);
        const std::vector<double> w{1.0};
        CHECK(composite_dissimilarity(s, data[0], data[1], w, norm) == 1.0);
        CHECK(composite_dissimilarity(s, data[0], data[0], w, norm) == 0.0);
    }
}

TEST_CASE("composite dissimilarity") {
    const FeatureSchema s = testutil::quantitative_schema(2);
    const TsNormalizer none;
    const Pattern a = testutil::scalar_pattern({0.1, 0.9});
    const Pattern b = testutil::scalar_pattern({0.4, 0.5});

    SUBCASE("identity and zero weights") {
        CHECK(composite_dissimilarity(s, a, a, std::vector<double>{0.7, 0.3}, none) == 0.0);
        CHECK(composite_dissimilarity(s, a, b, std::vector<double>{0.0, 0.0}, none) == 0.0);
    }
    SUBCASE("3-4-5 right triangle") {
        CHECK(composite_dissimilarity(s, a, b, std::vector<double>{1.0, 1.0}, none) ==
              doctest::Approx(0.5));
    }
    SUBCASE("single quantitative feature with unit weight is |x-y|") {
        const FeatureSchema one = testutil::quantitative_schema(1);
        Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            const double x = rng.uniform(), y = rng.uniform();
            CHECK(composite_dissimilarity(one, Pattern{{x}}, Pattern{{y}},
                                          std::vector<double>{1.0}, none) ==
                  doctest::Approx(std::fabs(x - y)));
        }
    }
    SUBCASE("weight arity mismatch") {
        CHECK_THROWS_AS(composite_dissimilarity(s, a, b, std::vector<double>{1.0}, none),
                        SchemaError);
    }
    SUBCASE("monotone in each weight component") {
        Rng rng(11);
        for (int i = 0; i < 200; ++i) {
            std::vector<double> w{rng.uniform(), rng.uniform()};
            const double base = composite_dissimilarity(s, a, b, w, none);
            const std::size_t j = rng.uniform_index(2);
            w[j] = std::min(1.0, w[j] + rng.uniform());
            CHECK(composite_dissimilarity(s, a, b, w, none) >= base - 1e-15);
        }
    }
}

TEST_CASE("kernel symmetry, identity and non-negativity across all kinds") {
    const FeatureSchema s({{.name = "day", .kind = FeatureKind::circular, .period = 30},
                           {.name = "mat", .kind = FeatureKind::categorical, .domain = {"A", "B", "C"}},
                           {.name = "q", .kind = FeatureKind::quantitative},
                           {.name = "sp", .kind = FeatureKind::special_quantitative},
                           {.name = "ts", .kind = FeatureKind::timeseries}});
    Rng rng(99);
    const auto random_pattern = [&] {
        Pattern p;
        p.values.emplace_back(rng.uniform_int(0, 30));
        p.values.emplace_back(std::string(1, static_cast<char>('A' + rng.uniform_index(3))));
        p.values.emplace_back(rng.uniform());
        p.values.emplace_back(rng.uniform() < 0.2 ? SpecialValue::na() : SpecialValue{rng.uniform()});
        EventSequence e(rng.uniform_index(4));
        for (auto& v : e) v = rng.uniform(0.0, 50.0);
        std::sort(e.begin(), e.end());
        p.values.emplace_back(std::move(e));
        return p;
    };

    std::vector<Pattern> data;
    for (int i = 0; i < 20; ++i) data.push_back(random_pattern());
    const TsNormalizer norm = fit_ts_normalizer(s, data);
    std::vector<double> w(5);
    for (auto& v : w) v = rng.uniform();

    for (int trial = 0; trial < 100; ++trial) {
        const auto& x = data[rng.uniform_index(data.size())];
        const auto& y = data[rng.uniform_index(data.size())];
        const double dxy = composite_dissimilarity(s, x, y, w, norm);
        CHECK(dxy >= 0.0);
        CHECK(dxy == doctest::Approx(composite_dissimilarity(s, y, x, w, norm)));
        CHECK(composite_dissimilarity(s, x, x, w, norm) == 0.0);
    }
}

TEST_CASE("dissimilarity matrix") {
    const FeatureSchema s = testutil::quantitative_schema(1);
    const TsNormalizer none;

    SUBCASE("singleton gives a 1x1 zero matrix") {
        const auto d = dissimilarity_matrix(s, {Pattern{{0.3}}}, std::vector<double>{1.0}, none);
        REQUIRE(d.size() == 1);
        CHECK(d[0][0] == 0.0);
    }
    SUBCASE("duplicate patterns have zero off-diagonal") {
        const auto d = dissimilarity_matrix(s, {Pattern{{0.3}}, Pattern{{0.3}}},
                                            std::vector<double>{1.0}, none);
        CHECK(d[0][1] == 0.0);
        CHECK(d[1][0] == 0.0);
    }
    SUBCASE("symmetry on random data") {
        Rng rng(5);
        std::vector<Pattern> data;
        for (int i = 0; i < 80; ++i) data.push_back(Pattern{{rng.uniform()}});
        const auto d = dissimilarity_matrix(s, data, std::vector<double>{0.8}, none);
        for (std::size_t i = 0; i < data.size(); ++i) {
            CHECK(d[i][i] == 0.0);
            for (std::size_t j = 0; j < data.size(); ++j) CHECK(d[i][j] == d[j][i]);
        }
    }
}

TEST_CASE("component cache agrees with the direct kernel path") {
    const FeatureSchema s({{.name = "day", .kind = FeatureKind::circular, .period = 100},
                           {.name = "mat", .kind = FeatureKind::categorical, .domain = {"A", "B"}},
                           {.name = "q", .kind = FeatureKind::quantitative},
                           {.name = "ts", .kind = FeatureKind::timeseries}});
    Rng rng(123);
    std::vector<Pattern> data;
    for (int i = 0; i < 15; ++i) {
        Pattern p;
        p.values.emplace_back(rng.uniform_int(0, 100));
        p.values.emplace_back(std::string(rng.uniform() < 0.5 ? "A" : "B"));
        p.values.emplace_back(rng.uniform());
        EventSequence e(1 + rng.uniform_index(4));
        for (auto& v : e) v = rng.uniform(0.0, 30.0);
        p.values.emplace_back(std::move(e));
        data.push_back(std::move(p));
    }
    const TsNormalizer norm = fit_ts_normalizer(s, data);
    const ComponentCache cache(s, data, data, norm);
    std::vector<double> w{0.3, 0.9, 0.5, 0.2};
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t j = 0; j < data.size(); ++j)
            CHECK(cache.weighted(i, j, w) ==
                  doctest::Approx(composite_dissimilarity(s, data[i], data[j], w, norm))
                      .epsilon(1e-12));
}
