#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "occ/experiments.hpp"
#include "occ/optimizer.hpp"
#include "occ/preprocessing.hpp"
#include "occ/rand.hpp"
#include "testutil.hpp"

using namespace occ;

namespace {

std::vector<Pattern> line_points(std::initializer_list<double> xs) {
    std::vector<Pattern> out;
    for (double x : xs) out.push_back(Pattern{{x}});
    return out;
}

GaConfig tiny_ga(std::size_t k) {
    GaConfig cfg;
    cfg.population = 12;
    cfg.max_generations = 30;
    cfg.stall_generations = 10;
    cfg.k_min = cfg.k_max = k;
    cfg.seed = 7;
    return cfg;
}

}  // namespace

TEST_CASE("objective value composition") {
    const FeatureSchema schema = testutil::quantitative_schema(1);
    const auto train = line_points({0.1, 0.2, 0.5, 0.6, 0.8, 0.9});

    SUBCASE("perfect accuracy, zero tolerances, k = 3") {
        // Zero weights collapse every dissimilarity, so an all-target
        // validation set is classified perfectly: f = 0.8*1 + 0.2*3 = 1.4.
        const auto validation = line_points({0.3, 0.4, 0.7, 0.95});
        const Genome g{{0.0}, {0.0, 0.0, 0.0}};
        CHECK(fitness(g, schema, train, validation, std::vector<bool>(4, true), 3, 0.8) ==
              doctest::Approx(1.4));
    }
    SUBCASE("accuracy 0.9 with sigma (0.5, 0.5), k = 2") {
        // Nine targets and one non-target, all accepted: A = 0.9.
        const auto validation =
            line_points({0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95});
        std::vector<bool> labels(10, true);
        labels[9] = false;
        const Genome g{{0.0}, {0.5, 0.5}};
        CHECK(fitness(g, schema, train, validation, labels, 2, 0.8) == doctest::Approx(0.92));
    }
    SUBCASE("alpha = 1 reduces to plain accuracy") {
        const auto validation = line_points({0.05, 0.5, 0.95, 0.2});
        std::vector<bool> labels{true, true, true, false};
        const Genome g{{0.0}, {0.1, 0.2}};
        CHECK(fitness(g, schema, train, validation, labels, 2, 1.0) == doctest::Approx(0.75));
    }
    SUBCASE("monotone decreasing in each tolerance at fixed accuracy") {
        const auto validation = line_points({0.3, 0.7});
        const std::vector<bool> labels{true, true};
        Genome g{{0.0}, {0.1, 0.1, 0.1}};
        const double base = fitness(g, schema, train, validation, labels, 3, 0.8);
        g.tolerances[1] = 0.3;
        const double worse = fitness(g, schema, train, validation, labels, 3, 0.8);
        CHECK(worse < base);
        CHECK(base - worse == doctest::Approx(0.2 * 0.2));
    }
    SUBCASE("genome arity is checked") {
        OccTrainer trainer(schema, train, line_points({0.5}), {true});
        CHECK_THROWS_AS(trainer.fitness(Genome{{0.5, 0.5}, {0.1}}, 1, GaConfig{}), OptimizerError);
        CHECK_THROWS_AS(trainer.fitness(Genome{{0.5}, {0.1, 0.1}}, 1, GaConfig{}), OptimizerError);
    }
}

TEST_CASE("evolution mechanics on a small problem") {
    SyntheticSpec spec;
    spec.centers = {{0.25, 0.25}, {0.75, 0.75}};
    spec.spreads = {0.02, 0.02};
    spec.train_targets = 24;
    spec.validation_targets = 24;
    spec.test_targets = 24;
    spec.nontargets = 60;
    spec.seed = 3;
    const auto prob = generate_gaussian_clusters(spec);
    OccTrainer trainer(prob.schema, prob.train, prob.validation, prob.validation_is_target);

    const GaConfig cfg = tiny_ga(2);

    SUBCASE("best fitness trace is non-decreasing and genomes stay in bounds") {
        const auto [best, trace] = trainer.evolve(cfg, 2);
        REQUIRE(!trace.best_fitness.empty());
        for (std::size_t g = 1; g < trace.best_fitness.size(); ++g)
            CHECK(trace.best_fitness[g] >= trace.best_fitness[g - 1]);
        for (double w : best.weights) {
            CHECK(w >= 0.0);
            CHECK(w <= 1.0);
        }
        for (double s : best.tolerances) {
            CHECK(s >= 0.0);
            CHECK(s <= cfg.sigma_max);
        }
        CHECK(best.weights.size() == 2);
        CHECK(best.tolerances.size() == 2);
    }
    SUBCASE("fixed seed reproduces the best genome exactly") {
        const auto a = trainer.evolve(cfg, 2);
        const auto b = trainer.evolve(cfg, 2);
        CHECK(a.first == b.first);
        CHECK(a.second.best_fitness == b.second.best_fitness);
    }
    SUBCASE("config validation") {
        GaConfig bad = cfg;
        bad.population = 1;
        bad.elite_count = 2;
        CHECK_THROWS_AS(trainer.evolve(bad, 2), OptimizerError);
        bad = cfg;
        bad.crossover_fraction = 1.5;
        CHECK_THROWS_AS(trainer.evolve(bad, 2), OptimizerError);
    }
}

TEST_CASE("k sweep training") {
    SUBCASE("small three-cluster problem reaches validation accuracy 1 at k = 3") {
        SyntheticSpec spec;
        spec.centers = {{0.2, 0.2}, {0.5, 0.8}, {0.8, 0.3}};
        spec.spreads = {0.02, 0.02, 0.02};
        spec.train_targets = 30;
        spec.validation_targets = 30;
        spec.test_targets = 30;
        spec.nontargets = 0;   // targets only, like the first synthetic study
        spec.seed = 5;
        const auto prob = generate_gaussian_clusters(spec);

        GaConfig cfg;
        cfg.population = 30;
        cfg.max_generations = 60;
        cfg.stall_generations = 15;
        cfg.k_min = cfg.k_max = 3;
        cfg.seed = 11;
        const TrainResult r = train_occ(cfg, prob.schema, prob.train, prob.validation,
                                        std::vector<bool>(prob.validation.size(), true));
        CHECK(r.chosen_k == 3);
        REQUIRE(r.per_k.size() == 1);
        CHECK(r.per_k[0].validation_accuracy == 1.0);
        CHECK(r.ensemble.replicates.size() == 3);

        // Every test target must fall inside the voted decision regions.
        std::size_t accepted = 0;
        for (const auto& x : prob.test)
            if (ensemble_classify(x, r.ensemble).target) ++accepted;
        CHECK(accepted == prob.test.size());
    }
    SUBCASE("identical patterns collapse to zero extent and accept duplicates") {
        const FeatureSchema schema = testutil::quantitative_schema(1);
        const std::vector<Pattern> train(8, Pattern{{0.5}});
        const std::vector<Pattern> validation(4, Pattern{{0.5}});

        GaConfig cfg = tiny_ga(1);
        cfg.max_generations = 5;
        const TrainResult r = train_occ(cfg, schema, train, validation,
                                        std::vector<bool>(validation.size(), true));
        CHECK(r.chosen_k == 1);
        CHECK(r.per_k[0].validation_accuracy == 1.0);
        CHECK(r.ensemble.replicates[0].clusters[0].extent == 0.0);
        CHECK(ensemble_classify(Pattern{{0.5}}, r.ensemble).target);
    }
    SUBCASE("accuracy ties resolve to the lower k") {
        const FeatureSchema schema = testutil::quantitative_schema(1);
        const std::vector<Pattern> train(8, Pattern{{0.5}});
        const std::vector<Pattern> validation(4, Pattern{{0.5}});
        GaConfig cfg = tiny_ga(1);
        cfg.k_min = 1;
        cfg.k_max = 2;
        cfg.max_generations = 5;
        const TrainResult r = train_occ(cfg, schema, train, validation,
                                        std::vector<bool>(validation.size(), true));
        REQUIRE(r.per_k.size() == 2);
        CHECK(r.per_k[0].validation_accuracy == r.per_k[1].validation_accuracy);
        CHECK(r.chosen_k == 1);
    }
    SUBCASE("infeasible k range") {
        const FeatureSchema schema = testutil::quantitative_schema(1);
        const auto train = line_points({0.1, 0.2});
        const auto validation = line_points({0.15});
        GaConfig cfg = tiny_ga(3);   // k = 3 > |train| = 2
        CHECK_THROWS_AS(
            train_occ(cfg, schema, train, validation, std::vector<bool>{true}), OptimizerError);
    }
}

TEST_CASE("training is deterministic end to end") {
    SyntheticSpec spec;
    spec.centers = {{0.3, 0.3}, {0.7, 0.7}};
    spec.spreads = {0.03, 0.03};
    spec.train_targets = 20;
    spec.validation_targets = 20;
    spec.test_targets = 0;
    spec.nontargets = 40;
    spec.seed = 13;
    const auto prob = generate_gaussian_clusters(spec);

    GaConfig cfg = tiny_ga(2);
    const TrainResult a = train_occ(cfg, prob.schema, prob.train, prob.validation,
                                    prob.validation_is_target);
    const TrainResult b = train_occ(cfg, prob.schema, prob.train, prob.validation,
                                    prob.validation_is_target);

    testutil::TempDir dir("det");
    save_ensemble(a.ensemble, dir.path() / "a.json", {"h", 1});
    save_ensemble(b.ensemble, dir.path() / "b.json", {"h", 1});
    std::ifstream fa(dir.path() / "a.json"), fb(dir.path() / "b.json");
    const std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(a.chosen_k == b.chosen_k);
}

TEST_CASE("replicates share the genome but differ in initialization seed") {
    CHECK(OccTrainer::replicate_seed(1, 3, 0) != OccTrainer::replicate_seed(1, 3, 1));
    CHECK(OccTrainer::replicate_seed(1, 3, 0) != OccTrainer::replicate_seed(2, 3, 0));
    CHECK(OccTrainer::replicate_seed(1, 3, 0) == OccTrainer::replicate_seed(1, 3, 0));
}
