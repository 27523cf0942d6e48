#include "occ/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>

#include "occ/experiments.hpp"
#include "occ/rand.hpp"

namespace occ::cli {

using nlohmann::json;

RunMode run_mode_from_string(std::string_view s) {
    if (s == "train") return RunMode::train;
    if (s == "classify") return RunMode::classify;
    if (s == "evaluate") return RunMode::evaluate;
    if (s == "synth") return RunMode::synth;
    if (s == "experiment") return RunMode::experiment;
    throw ConfigError("unknown mode: " + std::string(s));
}

namespace {

std::string_view mode_name(RunMode m) {
    switch (m) {
        case RunMode::train: return "train";
        case RunMode::classify: return "classify";
        case RunMode::evaluate: return "evaluate";
        case RunMode::synth: return "synth";
        case RunMode::experiment: return "experiment";
    }
    return "?";
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double bounded(const json& j, const std::string& key, double lo, double hi, double fallback) {
    if (!j.contains(key)) return fallback;
    const double v = j.at(key).get<double>();
    if (v < lo || v > hi)
        throw ConfigError(key + " = " + std::to_string(v) + " outside [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
    return v;
}

long positive_int(const json& j, const std::string& key, long fallback, long lo = 0) {
    if (!j.contains(key)) return fallback;
    const long v = j.at(key).get<long>();
    if (v < lo) throw ConfigError(key + " must be >= " + std::to_string(lo));
    return v;
}

void apply_file(RunConfig& cfg, const json& j) {
    check_keys(j, {"mode", "train_data", "validation_data", "data", "schema", "stats", "model",
                   "output_dir", "extent", "embed", "seed", "k_min", "k_max", "alpha", "sigma_max",
                   "ga", "synth", "experiment"},
               "config");
    if (j.contains("mode")) cfg.mode = run_mode_from_string(j.at("mode").get<std::string>());
    const auto path = [&](const char* key, std::filesystem::path& out) {
        if (j.contains(key)) out = j.at(key).get<std::string>();
    };
    path("train_data", cfg.train_data);
    path("validation_data", cfg.validation_data);
    path("data", cfg.data);
    path("schema", cfg.schema);
    path("stats", cfg.stats);
    path("model", cfg.model);
    path("output_dir", cfg.output_dir);
    if (j.contains("extent"))
        cfg.extent = extent_strategy_from_string(j.at("extent").get<std::string>());
    if (j.contains("embed")) cfg.embed = j.at("embed").get<bool>();
    cfg.ga.seed = static_cast<std::uint64_t>(positive_int(j, "seed", static_cast<long>(cfg.ga.seed)));
    cfg.ga.k_min = static_cast<std::size_t>(positive_int(j, "k_min", static_cast<long>(cfg.ga.k_min), 1));
    cfg.ga.k_max = static_cast<std::size_t>(positive_int(j, "k_max", static_cast<long>(cfg.ga.k_max), 1));
    cfg.ga.alpha = bounded(j, "alpha", 0.0, 1.0, cfg.ga.alpha);
    cfg.ga.sigma_max = bounded(j, "sigma_max", 1e-9, 1.0, cfg.ga.sigma_max);

    if (j.contains("ga")) {
        const json& g = j.at("ga");
        check_keys(g, {"population", "crossover_fraction", "elite_count", "max_generations",
                       "stall_generations", "stall_tolerance", "normalize_sigma_term"},
                   "ga block");
        cfg.ga.population = static_cast<std::size_t>(
            positive_int(g, "population", static_cast<long>(cfg.ga.population), 1));
        cfg.ga.crossover_fraction =
            bounded(g, "crossover_fraction", 0.0, 1.0, cfg.ga.crossover_fraction);
        cfg.ga.elite_count = static_cast<std::size_t>(
            positive_int(g, "elite_count", static_cast<long>(cfg.ga.elite_count)));
        cfg.ga.max_generations = static_cast<std::size_t>(
            positive_int(g, "max_generations", static_cast<long>(cfg.ga.max_generations), 1));
        cfg.ga.stall_generations = static_cast<std::size_t>(
            positive_int(g, "stall_generations", static_cast<long>(cfg.ga.stall_generations), 1));
        cfg.ga.stall_tolerance = bounded(g, "stall_tolerance", 0.0, 1e9, cfg.ga.stall_tolerance);
        if (g.contains("normalize_sigma_term"))
            cfg.ga.normalize_sigma_term = g.at("normalize_sigma_term").get<bool>();
    }

    if (j.contains("synth")) {
        const json& s = j.at("synth");
        check_keys(s, {"kind", "seed", "centers", "spreads", "train_targets", "validation_targets",
                       "test_targets", "nontargets", "clusters"},
                   "synth block");
        if (s.contains("kind")) cfg.synth.kind = s.at("kind").get<std::string>();
        if (cfg.synth.kind != "gaussian" && cfg.synth.kind != "heterogeneous")
            throw ConfigError("synth.kind must be 'gaussian' or 'heterogeneous'");
        auto& g = cfg.synth.gaussian;
        if (s.contains("centers")) {
            g.centers.clear();
            for (const auto& c : s.at("centers"))
                g.centers.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        }
        if (s.contains("spreads")) {
            g.spreads = s.at("spreads").get<std::vector<double>>();
            for (double sp : g.spreads)
                if (!(sp > 0.0)) throw ConfigError("synth.spreads must be positive");
        }
        g.train_targets = static_cast<std::size_t>(
            positive_int(s, "train_targets", static_cast<long>(g.train_targets)));
        g.validation_targets = static_cast<std::size_t>(
            positive_int(s, "validation_targets", static_cast<long>(g.validation_targets)));
        g.test_targets = static_cast<std::size_t>(
            positive_int(s, "test_targets", static_cast<long>(g.test_targets)));
        g.nontargets = static_cast<std::size_t>(
            positive_int(s, "nontargets", static_cast<long>(g.nontargets)));
        g.seed = static_cast<std::uint64_t>(positive_int(s, "seed", static_cast<long>(g.seed)));
        auto& h = cfg.synth.heterogeneous;
        h.clusters = static_cast<std::size_t>(
            positive_int(s, "clusters", static_cast<long>(h.clusters), 1));
        h.train_targets = g.train_targets ? g.train_targets : h.train_targets;
        h.validation_targets = g.validation_targets ? g.validation_targets : h.validation_targets;
        h.test_targets = g.test_targets ? g.test_targets : h.test_targets;
        h.nontargets = g.nontargets ? g.nontargets : h.nontargets;
        h.seed = g.seed;
    }

    if (j.contains("experiment")) {
        const json& e = j.at("experiment");
        check_keys(e, {"name", "ratios", "seeds", "uci_dir", "datasets"}, "experiment block");
        if (e.contains("name")) cfg.experiment.name = e.at("name").get<std::string>();
        if (e.contains("ratios")) {
            cfg.experiment.ratios = e.at("ratios").get<std::vector<double>>();
            for (double r : cfg.experiment.ratios)
                if (!(r > 0.0)) throw ConfigError("experiment.ratios must be positive");
        }
        if (e.contains("seeds"))
            cfg.experiment.seeds = e.at("seeds").get<std::vector<std::uint64_t>>();
        if (e.contains("uci_dir")) cfg.experiment.uci_dir = e.at("uci_dir").get<std::string>();
        if (e.contains("datasets"))
            cfg.experiment.datasets = e.at("datasets").get<std::vector<std::string>>();
    }
}

void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& overrides) {
    json j = json::object();
    json ga = json::object(), synth = json::object(), experiment = json::object();
    for (const auto& [key, value] : overrides) {
        const auto parse_number = [&]() -> json {
            try {
                return json::parse(value);
            } catch (const json::exception&) {
                throw ConfigError("flag " + key + ": cannot parse '" + value + "'");
            }
        };
        if (key == "mode" || key == "train_data" || key == "validation_data" || key == "data" ||
            key == "schema" || key == "stats" || key == "model" || key == "output_dir" ||
            key == "extent") {
            j[key] = value;
        } else if (key == "seed" || key == "k_min" || key == "k_max" || key == "alpha" ||
                   key == "sigma_max" || key == "embed") {
            j[key] = parse_number();
        } else if (key.rfind("ga.", 0) == 0) {
            ga[key.substr(3)] = parse_number();
        } else if (key == "synth.kind") {
            synth["kind"] = value;
        } else if (key.rfind("synth.", 0) == 0) {
            synth[key.substr(6)] = parse_number();
        } else if (key == "experiment.name" || key == "experiment.uci_dir") {
            experiment[key.substr(11)] = value;
        } else if (key.rfind("experiment.", 0) == 0) {
            experiment[key.substr(11)] = parse_number();
        } else {
            throw ConfigError("unknown flag '" + key + "'");
        }
    }
    if (!ga.empty()) j["ga"] = std::move(ga);
    if (!synth.empty()) j["synth"] = std::move(synth);
    if (!experiment.empty()) j["experiment"] = std::move(experiment);
    apply_file(cfg, j);
}

json canonical_config(const RunConfig& cfg) {
    return json{
        {"mode", std::string(mode_name(cfg.mode))},
        {"train_data", cfg.train_data.string()},
        {"validation_data", cfg.validation_data.string()},
        {"data", cfg.data.string()},
        {"schema", cfg.schema.string()},
        {"stats", cfg.stats.string()},
        {"model", cfg.model.string()},
        {"output_dir", cfg.output_dir.string()},
        {"extent", std::string(to_string(cfg.extent))},
        {"embed", cfg.embed},
        {"ga",
         {{"population", cfg.ga.population},
          {"crossover_fraction", cfg.ga.crossover_fraction},
          {"elite_count", cfg.ga.elite_count},
          {"max_generations", cfg.ga.max_generations},
          {"stall_generations", cfg.ga.stall_generations},
          {"stall_tolerance", cfg.ga.stall_tolerance},
          {"alpha", cfg.ga.alpha},
          {"sigma_max", cfg.ga.sigma_max},
          {"normalize_sigma_term", cfg.ga.normalize_sigma_term},
          {"k_min", cfg.ga.k_min},
          {"k_max", cfg.ga.k_max},
          {"seed", cfg.ga.seed}}},
        {"synth",
         {{"kind", cfg.synth.kind},
          {"seed", cfg.synth.gaussian.seed},
          {"train_targets", cfg.synth.gaussian.train_targets},
          {"validation_targets", cfg.synth.gaussian.validation_targets},
          {"test_targets", cfg.synth.gaussian.test_targets},
          {"nontargets", cfg.synth.gaussian.nontargets},
          {"clusters", cfg.synth.heterogeneous.clusters}}},
        {"experiment",
         {{"name", cfg.experiment.name},
          {"ratios", cfg.experiment.ratios},
          {"seeds", cfg.experiment.seeds},
          {"uci_dir", cfg.experiment.uci_dir.string()},
          {"datasets", cfg.experiment.datasets}}},
    };
}

}  // namespace

std::string config_hash(const RunConfig& cfg) {
    const std::string dump = canonical_config(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

RunConfig parse_config(const std::filesystem::path& config_path,
                       const std::map<std::string, std::string>& overrides) {
    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw IoError("cannot open config " + config_path.string());
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw IoError(config_path.string() + ": " + e.what());
        }
        apply_file(cfg, j);
    }
    apply_overrides(cfg, overrides);
    if (cfg.ga.k_min > cfg.ga.k_max) throw ConfigError("k_min > k_max");
    if (cfg.ga.elite_count > cfg.ga.population) throw ConfigError("elite_count > population");
    if (cfg.mode == RunMode::experiment) {
        const auto& n = cfg.experiment.name;
        if (n != "gaussian" && n != "implicit-fpr" && n != "uci" && n != "heterogeneous")
            throw ConfigError("experiment.name must be one of gaussian, implicit-fpr, uci, heterogeneous");
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Report writing
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

struct Reporter {
    std::filesystem::path dir;
    std::string header;   ///< reproducibility comment line

    std::filesystem::path write_tsv(const std::string& name, const std::vector<std::string>& columns,
                                    const std::vector<std::vector<std::string>>& rows) const {
        const auto path = dir / name;
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path.string());
        out << header << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << columns[c] << (c + 1 < columns.size() ? '\t' : '\n');
        for (const auto& row : rows)
            for (std::size_t c = 0; c < row.size(); ++c)
                out << row[c] << (c + 1 < row.size() ? '\t' : '\n');
        if (!out) throw IoError("write failed: " + path.string());
        return path;
    }
};

void print_summary(const json& j) { std::cout << "SUMMARY " << j.dump() << std::endl; }

LoadedDataset load_with_model_context(const std::filesystem::path& data,
                                      const FeatureSchema& schema,
                                      const NormalizationStats& stats) {
    return load_dataset(data, schema, &stats);
}

int run_train(const RunConfig& cfg, const Reporter& rep, const ReproHeader& header) {
    if (cfg.train_data.empty() || cfg.validation_data.empty() || cfg.schema.empty())
        throw IoError("train mode needs train_data, validation_data and schema paths");

    LoadedDataset train;
    if (cfg.stats.empty()) {
        train = load_dataset(cfg.train_data, cfg.schema);
    } else {
        const NormalizationStats st = load_stats(cfg.stats);
        train = load_dataset(cfg.train_data, cfg.schema, &st);
    }
    const LoadedDataset validation = load_dataset(cfg.validation_data, cfg.schema, &train.stats);

    OccTrainer trainer(train.schema, train.patterns, validation.patterns, validation.is_target,
                       cfg.extent, train.stats);
    const TrainResult result = trainer.train(cfg.ga);

    save_ensemble(result.ensemble,
                  cfg.model.empty() ? rep.dir / "model.json" : cfg.model, header);

    const bool val_has_both =
        std::find(validation.is_target.begin(), validation.is_target.end(), false) !=
            validation.is_target.end() &&
        std::find(validation.is_target.begin(), validation.is_target.end(), true) !=
            validation.is_target.end();

    std::vector<std::vector<std::string>> rows;
    for (const auto& kr : result.per_k) {
        const Ensemble e = trainer.build_ensemble(kr.genome, kr.k, cfg.ga.seed);
        const EvaluationSummary s = evaluate_ensemble(e, validation.patterns, validation.is_target);
        rows.push_back({std::to_string(kr.k), fmt(kr.best_fitness), fmt(s.metrics.fpr),
                        fmt(s.metrics.recall), fmt(s.metrics.precision), fmt(s.metrics.accuracy),
                        val_has_both ? fmt(*s.auc) : "NA", fmt(kr.validation_fuzzy_entropy),
                        kr.genome.weights.size() >= 2 ? fmt(weight_entropy(kr.genome.weights)) : "NA",
                        kr.fitness_entropy_mi ? fmt(*kr.fitness_entropy_mi) : "NA",
                        std::to_string(kr.selected_replicate),
                        kr.k == result.chosen_k ? "*" : ""});
    }
    const auto report_path =
        rep.write_tsv("train_report.tsv",
                      {"k", "fitness", "FPR", "R", "P", "A", "AUC", "FE", "WH", "MI", "sel", "chosen"},
                      rows);

    for (const auto& kr : result.per_k) {
        if (kr.k != result.chosen_k) continue;
        std::vector<std::vector<std::string>> trace_rows;
        for (std::size_t g = 0; g < kr.trace.best_fitness.size(); ++g)
            trace_rows.push_back({std::to_string(g), fmt(kr.trace.best_fitness[g], 9),
                                  fmt(kr.trace.best_weight_entropy[g], 9)});
        rep.write_tsv("trace.tsv", {"generation", "best_fitness", "weight_entropy"}, trace_rows);
    }

    print_summary(json{{"mode", "train"},
                       {"status", "ok"},
                       {"chosen_k", result.chosen_k},
                       {"model", (cfg.model.empty() ? rep.dir / "model.json" : cfg.model).string()},
                       {"report", report_path.string()}});
    return 0;
}

int run_classify(const RunConfig& cfg, const Reporter& rep) {
    if (cfg.model.empty()) throw IoError("classify mode needs a model path");
    if (cfg.data.empty()) throw IoError("classify mode needs a data path");
    const Ensemble e = load_ensemble(cfg.model);
    const auto& schema = e.replicates.front().schema;
    const LoadedDataset ds = load_with_model_context(cfg.data, schema, e.replicates.front().stats);

    std::vector<std::vector<std::string>> rows;
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < ds.patterns.size(); ++i) {
        const Decision d = ensemble_classify(ds.patterns[i], e);
        accepted += d.target ? 1 : 0;
        rows.push_back({std::to_string(i), d.target ? "1" : "0", fmt(d.membership),
                        std::to_string(d.cluster), fmt(d.dissimilarity)});
    }
    const auto path = rep.write_tsv(
        "decisions.tsv", {"index", "target", "membership", "cluster", "dissimilarity"}, rows);
    print_summary(json{{"mode", "classify"},
                       {"status", "ok"},
                       {"patterns", ds.patterns.size()},
                       {"accepted", accepted},
                       {"decisions", path.string()}});
    return 0;
}

int run_evaluate(const RunConfig& cfg, const Reporter& rep) {
    if (cfg.model.empty()) throw IoError("evaluate mode needs a model path");
    if (cfg.data.empty()) throw IoError("evaluate mode needs a data path");
    const Ensemble e = load_ensemble(cfg.model);
    const auto& schema = e.replicates.front().schema;
    const LoadedDataset ds = load_with_model_context(cfg.data, schema, e.replicates.front().stats);

    const EvaluationSummary s = evaluate_ensemble(e, ds.patterns, ds.is_target);
    const auto path = rep.write_tsv(
        "evaluation_report.tsv",
        {"TP", "FP", "TN", "FN", "FPR", "R", "P", "A", "AUC", "FE"},
        {{std::to_string(s.counts.tp), std::to_string(s.counts.fp), std::to_string(s.counts.tn),
          std::to_string(s.counts.fn), fmt(s.metrics.fpr), fmt(s.metrics.recall),
          fmt(s.metrics.precision), fmt(s.metrics.accuracy), s.auc ? fmt(*s.auc) : "NA",
          fmt(s.fuzzy_entropy)}});

    std::vector<std::vector<std::string>> decision_rows;
    for (std::size_t i = 0; i < ds.patterns.size(); ++i)
        decision_rows.push_back({std::to_string(i), s.predictions[i] ? "1" : "0",
                                 fmt(s.memberships[i]), ds.is_target[i] ? "1" : "0"});
    rep.write_tsv("decisions.tsv", {"index", "predicted", "membership", "target"}, decision_rows);

    json summary{{"mode", "evaluate"}, {"status", "ok"},
                 {"accuracy", s.metrics.accuracy},   {"fpr", s.metrics.fpr},
                 {"report", path.string()}};
    if (s.auc) summary["auc"] = *s.auc;

    if (cfg.embed) {
        // Unit-weight dissimilarity structure of the evaluated dataset.
        const std::vector<double> unit(schema.arity(), 1.0);
        const TsNormalizer norm = fit_ts_normalizer(schema, ds.patterns);
        const auto d = dissimilarity_matrix(schema, ds.patterns, unit, norm);
        const auto coords = embed_dissimilarity(d);
        std::vector<std::vector<std::string>> coord_rows;
        for (std::size_t i = 0; i < coords.size(); ++i)
            coord_rows.push_back({std::to_string(i), fmt(coords[i][0], 9), fmt(coords[i][1], 9),
                                  ds.is_target[i] ? "1" : "0"});
        summary["embedding"] =
            rep.write_tsv("embedding.tsv", {"index", "pc1", "pc2", "target"}, coord_rows).string();
    }
    print_summary(summary);
    return 0;
}

int run_synth(const RunConfig& cfg, const Reporter& rep, const ReproHeader& header) {
    SyntheticProblem prob;
    if (cfg.synth.kind == "gaussian") {
        SyntheticSpec spec = cfg.synth.gaussian;
        if (spec.centers.empty()) {
            spec.centers = {{0.2, 0.2}, {0.5, 0.8}, {0.8, 0.3}};
            spec.spreads = {0.03, 0.03, 0.03};
        }
        prob = generate_gaussian_clusters(spec);
    } else {
        prob = generate_heterogeneous_clusters(cfg.synth.heterogeneous);
    }

    save_schema(prob.schema, rep.dir / "schema.json", &header);
    save_stats(identity_stats(prob.schema), rep.dir / "stats.json", &header);
    save_dataset(rep.dir / "train.jsonl", prob.schema, prob.train, nullptr, &header);
    save_dataset(rep.dir / "validation.jsonl", prob.schema, prob.validation,
                 &prob.validation_is_target, &header);
    save_dataset(rep.dir / "test.jsonl", prob.schema, prob.test, &prob.test_is_target, &header);

    print_summary(json{{"mode", "synth"},
                       {"status", "ok"},
                       {"kind", cfg.synth.kind},
                       {"train", (rep.dir / "train.jsonl").string()},
                       {"validation", (rep.dir / "validation.jsonl").string()},
                       {"test", (rep.dir / "test.jsonl").string()},
                       {"schema", (rep.dir / "schema.json").string()},
                       {"stats", (rep.dir / "stats.json").string()}});
    return 0;
}

int run_experiment(const RunConfig& cfg, const Reporter& rep) {
    const auto& name = cfg.experiment.name;
    if (name == "gaussian") {
        GaussianExperimentConfig gc;
        gc.ga = cfg.ga;
        gc.ga.k_min = gc.ga.k_max = 3;
        gc.extent = cfg.extent;
        gc.data.seed = cfg.ga.seed;
        const auto r = run_gaussian_experiment(gc);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < r.replicate_test_accuracy.size(); ++i)
            rows.push_back({"replicate_" + std::to_string(i), fmt(r.replicate_test_accuracy[i]),
                            i == r.selected_replicate ? "selected" : ""});
        rows.push_back({"voted", fmt(r.voted_test_accuracy), ""});
        rows.push_back({"validation_fe", fmt(r.selected_validation_fe), ""});
        const auto path = rep.write_tsv("gaussian_report.tsv", {"quantity", "value", "note"}, rows);
        print_summary(json{{"mode", "experiment"},
                           {"name", name},
                           {"status", "ok"},
                           {"voted_test_accuracy", r.voted_test_accuracy},
                           {"validation_fe", r.selected_validation_fe},
                           {"report", path.string()}});
        return 0;
    }
    if (name == "implicit-fpr") {
        ImplicitFprConfig ic;
        ic.ga = cfg.ga;
        ic.ga.k_min = ic.ga.k_max = 3;
        const auto r = run_implicit_fpr_experiment(cfg.experiment.ratios, ic, cfg.ga.seed);
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : r.points)
            rows.push_back({fmt(p.ratio, 4), std::to_string(p.targets), fmt(p.fpr), fmt(p.recall),
                            fmt(p.accuracy), fmt(p.auc), fmt(p.fuzzy_entropy)});
        const auto path = rep.write_tsv("implicit_fpr.tsv",
                                        {"ratio", "targets", "FPR", "R", "A", "AUC", "FE"}, rows);
        print_summary(json{{"mode", "experiment"},
                           {"name", name},
                           {"status", "ok"},
                           {"correlation", r.correlation},
                           {"report", path.string()}});
        return 0;
    }
    if (name == "heterogeneous") {
        GaConfig ga = cfg.ga;
        HeterogeneousSpec spec = cfg.synth.heterogeneous;
        spec.seed = cfg.synth.gaussian.seed ? cfg.synth.gaussian.seed : cfg.ga.seed;
        if (ga.k_min == 1 && ga.k_max == 1) ga.k_min = ga.k_max = spec.clusters;
        const auto r = run_heterogeneous_experiment(spec, ga);
        const auto path = rep.write_tsv(
            "heterogeneous_report.tsv",
            {"k", "FPR", "R", "A", "AUC", "FE", "MI", "trace_nondecreasing"},
            {{std::to_string(r.chosen_k), fmt(r.test.metrics.fpr), fmt(r.test.metrics.recall),
              fmt(r.test.metrics.accuracy), r.test.auc ? fmt(*r.test.auc) : "NA",
              fmt(r.test.fuzzy_entropy), r.fitness_entropy_mi ? fmt(*r.fitness_entropy_mi) : "NA",
              r.trace_nondecreasing ? "yes" : "no"}});
        print_summary(json{{"mode", "experiment"},
                           {"name", name},
                           {"status", "ok"},
                           {"auc", r.test.auc.value_or(0.0)},
                           {"report", path.string()}});
        return 0;
    }

    // uci
    std::vector<std::vector<std::string>> rows;
    std::size_t ran = 0;
    for (const auto& ds_name : cfg.experiment.datasets) {
        BenchmarkDataset ds;
        ds.name = ds_name;
        ds.data_path = cfg.experiment.uci_dir / ds_name / "data.jsonl";
        ds.schema_path = cfg.experiment.uci_dir / ds_name / "schema.json";
        if (ds_name == "iris") ds.k_min = 1, ds.k_max = 3;
        else if (ds_name == "breastw") ds.k_min = 1, ds.k_max = 4;
        else ds.k_min = 3, ds.k_max = 6;
        if (!std::filesystem::exists(ds.data_path) || !std::filesystem::exists(ds.schema_path)) {
            rows.push_back({ds_name, "NA", "NA", "unavailable"});
            continue;
        }
        const BenchmarkResult r = run_benchmark(ds, cfg.ga, cfg.experiment.seeds);
        rows.push_back({ds_name, fmt(r.mean_auc), fmt(r.std_auc), "ok"});
        ++ran;
    }
    const auto path = rep.write_tsv("uci_report.tsv", {"dataset", "mean_AUC", "std_AUC", "status"}, rows);
    print_summary(json{{"mode", "experiment"},
                       {"name", name},
                       {"status", ran > 0 ? "ok" : "unavailable"},
                       {"ran", ran},
                       {"report", path.string()}});
    return ran > 0 ? 0 : 2;
}

}  // namespace

int run(const RunConfig& cfg) {
    try {
        std::filesystem::create_directories(cfg.output_dir);
        const ReproHeader header{config_hash(cfg), cfg.ga.seed};
        Reporter rep{cfg.output_dir,
                     "# occkit config=" + header.config_hash + " seed=" +
                         std::to_string(header.seed) + " format=occkit-report/1"};
        switch (cfg.mode) {
            case RunMode::train: return run_train(cfg, rep, header);
            case RunMode::classify: return run_classify(cfg, rep);
            case RunMode::evaluate: return run_evaluate(cfg, rep);
            case RunMode::synth: return run_synth(cfg, rep, header);
            case RunMode::experiment: return run_experiment(cfg, rep);
        }
        throw ConfigError("unhandled mode");
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        print_summary(json{{"mode", std::string(mode_name(cfg.mode))},
                           {"status", "io_error"},
                           {"error", e.what()}});
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        print_summary(json{{"mode", std::string(mode_name(cfg.mode))},
                           {"status", "error"},
                           {"error", e.what()}});
        return 1;
    }
}

}  // namespace occ::cli
