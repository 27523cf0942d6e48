#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "occ/cli.hpp"

namespace {

// Flags shared by every subcommand; only flags the user actually passed are
// forwarded as overrides so the config file keeps authority over the rest.
struct CommonFlags {
    std::string config;
    std::map<std::string, std::string> overrides;

    void add_to(CLI::App* cmd) {
        cmd->add_option("-c,--config", config, "JSON run configuration file");
        const auto opt = [this, cmd](const std::string& flag, const std::string& key,
                                     const std::string& help) {
            cmd->add_option_function<std::string>(
                   flag, [this, key](const std::string& v) { overrides[key] = v; }, help)
                ->expected(1);
        };
        opt("--train-data", "train_data", "training dataset (targets only)");
        opt("--validation-data", "validation_data", "validation dataset");
        opt("--data", "data", "dataset to classify/evaluate");
        opt("--schema", "schema", "feature schema file");
        opt("--stats", "stats", "normalization stats file");
        opt("--model", "model", "model file path");
        opt("--output-dir", "output_dir", "artifact output directory");
        opt("--extent", "extent", "cluster extent strategy: mean|max|std");
        opt("--seed", "seed", "top-level run seed");
        opt("--k-min", "k_min", "smallest partition order");
        opt("--k-max", "k_max", "largest partition order");
        opt("--alpha", "alpha", "accuracy weight in the objective");
        opt("--sigma-max", "sigma_max", "upper bound for tolerances");
        opt("--population", "ga.population", "GA population size");
        opt("--generations", "ga.max_generations", "GA generation cap");
        opt("--synth-kind", "synth.kind", "synthetic data kind: gaussian|heterogeneous");
        opt("--synth-seed", "synth.seed", "synthetic data seed");
        opt("--nontargets", "synth.nontargets", "non-target count per split");
        opt("--train-targets", "synth.train_targets", "target count in training split");
        opt("--validation-targets", "synth.validation_targets", "target count in validation split");
        opt("--test-targets", "synth.test_targets", "target count in test split");
        opt("--uci-dir", "experiment.uci_dir", "directory with benchmark datasets");
        opt("--embed", "embed", "write PCA embedding coordinates (true|false)");
    }
};

int dispatch(const std::string& mode, CommonFlags& flags) {
    flags.overrides["mode"] = mode;
    try {
        return occ::cli::run(occ::cli::parse_config(flags.config, flags.overrides));
    } catch (const occ::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-class classification over weighted heterogeneous dissimilarities"};
    app.require_subcommand(1);

    CommonFlags train_flags, classify_flags, evaluate_flags, synth_flags, experiment_flags;
    auto* train = app.add_subcommand("train", "synthesize a model from target patterns");
    train_flags.add_to(train);
    auto* classify = app.add_subcommand("classify", "label patterns with a trained model");
    classify_flags.add_to(classify);
    auto* evaluate = app.add_subcommand("evaluate", "score a trained model on labeled data");
    evaluate_flags.add_to(evaluate);
    auto* synth = app.add_subcommand("synth", "generate synthetic datasets");
    synth_flags.add_to(synth);
    auto* experiment = app.add_subcommand("experiment", "run a built-in study");
    experiment_flags.add_to(experiment);
    std::string experiment_name;
    experiment->add_option("name", experiment_name,
                           "gaussian | implicit-fpr | uci | heterogeneous")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (train->parsed()) return dispatch("train", train_flags);
    if (classify->parsed()) return dispatch("classify", classify_flags);
    if (evaluate->parsed()) return dispatch("evaluate", evaluate_flags);
    if (synth->parsed()) return dispatch("synth", synth_flags);
    experiment_flags.overrides["experiment.name"] = experiment_name;
    return dispatch("experiment", experiment_flags);
}
