#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "occ/cli.hpp"
#include "testutil.hpp"

using namespace occ;
using occ::cli::parse_config;
using occ::cli::RunConfig;
using occ::cli::RunMode;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("config parsing") {
    testutil::TempDir dir("config");

    SUBCASE("defaults fill the GA block") {
        const RunConfig cfg = parse_config("", {{"mode", "train"}});
        CHECK(cfg.mode == RunMode::train);
        CHECK(cfg.ga.population == 50);
        CHECK(cfg.ga.crossover_fraction == 0.8);
        CHECK(cfg.ga.elite_count == 2);
        CHECK(cfg.ga.max_generations == 250);
        CHECK(cfg.ga.alpha == 0.8);
        CHECK(cfg.ga.sigma_max == 0.5);
    }
    SUBCASE("out-of-bounds alpha is rejected with the bound") {
        write_json(dir.path() / "c.json", R"({"mode":"train","alpha":1.5})");
        CHECK_THROWS_WITH_AS(parse_config(dir.path() / "c.json", {}),
                             doctest::Contains("alpha"), occ::cli::ConfigError);
    }
    SUBCASE("unknown keys are named") {
        write_json(dir.path() / "c.json", R"({"mode":"train","populaton":50})");
        CHECK_THROWS_WITH_AS(parse_config(dir.path() / "c.json", {}),
                             doctest::Contains("populaton"), occ::cli::ConfigError);
    }
    SUBCASE("flags override file values") {
        write_json(dir.path() / "c.json", R"({"mode":"train","seed":1,"k_min":2,"k_max":4})");
        const RunConfig cfg = parse_config(dir.path() / "c.json", {{"seed", "99"}});
        CHECK(cfg.ga.seed == 99);
        CHECK(cfg.ga.k_min == 2);
        CHECK(cfg.ga.k_max == 4);
    }
    SUBCASE("k range sanity") {
        write_json(dir.path() / "c.json", R"({"mode":"train","k_min":5,"k_max":2})");
        CHECK_THROWS_AS(parse_config(dir.path() / "c.json", {}), occ::cli::ConfigError);
    }
    SUBCASE("missing config file is an I/O error") {
        CHECK_THROWS_AS(parse_config(dir.path() / "absent.json", {}), IoError);
    }
    SUBCASE("experiment names are validated") {
        CHECK_THROWS_AS(parse_config("", {{"mode", "experiment"}, {"experiment.name", "nope"}}),
                        occ::cli::ConfigError);
    }
}

TEST_CASE("synth -> train -> evaluate -> classify pipeline") {
    testutil::TempDir dir("pipeline");
    const std::string out = (dir.path() / "out").string();

    // Small but non-trivial problem so the whole chain stays fast.
    RunConfig synth = parse_config("", {{"mode", "synth"},
                                        {"output_dir", out},
                                        {"synth.seed", "21"},
                                        {"synth.train_targets", "24"},
                                        {"synth.validation_targets", "24"},
                                        {"synth.test_targets", "24"},
                                        {"synth.nontargets", "48"}});
    REQUIRE(occ::cli::run(synth) == 0);
    CHECK(std::filesystem::exists(dir.path() / "out" / "train.jsonl"));
    CHECK(std::filesystem::exists(dir.path() / "out" / "schema.json"));

    RunConfig train = parse_config(
        "", {{"mode", "train"},
             {"train_data", (dir.path() / "out" / "train.jsonl").string()},
             {"validation_data", (dir.path() / "out" / "validation.jsonl").string()},
             {"schema", (dir.path() / "out" / "schema.json").string()},
             {"stats", (dir.path() / "out" / "stats.json").string()},
             {"model", (dir.path() / "out" / "model.json").string()},
             {"output_dir", out},
             {"k_min", "3"},
             {"k_max", "3"},
             {"seed", "31"},
             {"ga.population", "16"},
             {"ga.max_generations", "20"},
             {"ga.stall_generations", "8"}});
    REQUIRE(occ::cli::run(train) == 0);
    REQUIRE(std::filesystem::exists(dir.path() / "out" / "model.json"));
    const std::string report = slurp(dir.path() / "out" / "train_report.tsv");
    CHECK(report.find("# occkit config=") == 0);   // reproducibility header
    CHECK(report.find("AUC") != std::string::npos);

    RunConfig evaluate = parse_config(
        "", {{"mode", "evaluate"},
             {"data", (dir.path() / "out" / "test.jsonl").string()},
             {"model", (dir.path() / "out" / "model.json").string()},
             {"output_dir", out},
             {"embed", "true"}});
    REQUIRE(occ::cli::run(evaluate) == 0);
    CHECK(std::filesystem::exists(dir.path() / "out" / "evaluation_report.tsv"));
    CHECK(std::filesystem::exists(dir.path() / "out" / "embedding.tsv"));

    const std::string model_before = slurp(dir.path() / "out" / "model.json");
    RunConfig classify = parse_config(
        "", {{"mode", "classify"},
             {"data", (dir.path() / "out" / "test.jsonl").string()},
             {"model", (dir.path() / "out" / "model.json").string()},
             {"output_dir", out}});
    REQUIRE(occ::cli::run(classify) == 0);
    CHECK(std::filesystem::exists(dir.path() / "out" / "decisions.tsv"));
    CHECK(slurp(dir.path() / "out" / "model.json") == model_before);   // never mutated
}

TEST_CASE("run exit codes") {
    testutil::TempDir dir("exitcodes");

    SUBCASE("classify with a missing model file exits 2") {
        const RunConfig cfg = parse_config(
            "", {{"mode", "classify"},
                 {"data", (dir.path() / "nope.jsonl").string()},
                 {"model", (dir.path() / "missing_model.json").string()},
                 {"output_dir", (dir.path() / "out").string()}});
        CHECK(occ::cli::run(cfg) == 2);
    }
    SUBCASE("classify with no model path at all exits 2") {
        const RunConfig cfg = parse_config(
            "", {{"mode", "classify"},
                 {"data", (dir.path() / "nope.jsonl").string()},
                 {"output_dir", (dir.path() / "out").string()}});
        CHECK(occ::cli::run(cfg) == 2);
    }
    SUBCASE("train with missing data exits 2") {
        const RunConfig cfg = parse_config(
            "", {{"mode", "train"},
                 {"train_data", (dir.path() / "a.jsonl").string()},
                 {"validation_data", (dir.path() / "b.jsonl").string()},
                 {"schema", (dir.path() / "s.json").string()},
                 {"output_dir", (dir.path() / "out").string()}});
        CHECK(occ::cli::run(cfg) == 2);
    }
}

TEST_CASE("identical config and seed produce byte-identical artifacts") {
    testutil::TempDir dir("determinism");
    const std::string out = (dir.path() / "out").string();

    RunConfig synth = parse_config("", {{"mode", "synth"},
                                        {"output_dir", out},
                                        {"synth.seed", "5"},
                                        {"synth.train_targets", "18"},
                                        {"synth.validation_targets", "18"},
                                        {"synth.test_targets", "18"},
                                        {"synth.nontargets", "36"}});
    REQUIRE(occ::cli::run(synth) == 0);

    const std::map<std::string, std::string> train_flags{
        {"mode", "train"},
        {"train_data", (dir.path() / "out" / "train.jsonl").string()},
        {"validation_data", (dir.path() / "out" / "validation.jsonl").string()},
        {"schema", (dir.path() / "out" / "schema.json").string()},
        {"model", (dir.path() / "out" / "model.json").string()},
        {"output_dir", out},
        {"k_min", "2"},
        {"k_max", "2"},
        {"seed", "77"},
        {"ga.population", "12"},
        {"ga.max_generations", "10"},
        {"ga.stall_generations", "5"}};

    REQUIRE(occ::cli::run(parse_config("", train_flags)) == 0);
    const std::string model1 = slurp(dir.path() / "out" / "model.json");
    const std::string report1 = slurp(dir.path() / "out" / "train_report.tsv");

    REQUIRE(occ::cli::run(parse_config("", train_flags)) == 0);
    CHECK(slurp(dir.path() / "out" / "model.json") == model1);
    CHECK(slurp(dir.path() / "out" / "train_report.tsv") == report1);
}

TEST_CASE("summary line is machine readable json") {
    testutil::TempDir dir("summary");
    std::stringstream captured;
    auto* old = std::cout.rdbuf(captured.rdbuf());
    const RunConfig cfg = parse_config("", {{"mode", "synth"},
                                            {"output_dir", (dir.path() / "out").string()},
                                            {"synth.train_targets", "3"},
                                            {"synth.validation_targets", "3"},
                                            {"synth.test_targets", "3"},
                                            {"synth.nontargets", "0"}});
    const int rc = occ::cli::run(cfg);
    std::cout.rdbuf(old);
    REQUIRE(rc == 0);

    std::string line, last;
    std::stringstream replay(captured.str());
    while (std::getline(replay, line))
        if (!line.empty()) last = line;
    REQUIRE(last.rfind("SUMMARY ", 0) == 0);
    const auto j = nlohmann::json::parse(last.substr(8));
    CHECK(j.at("mode") == "synth");
    CHECK(j.at("status") == "ok");
}
