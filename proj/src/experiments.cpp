#include "occ/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "occ/rand.hpp"

namespace occ {

EvaluationSummary evaluate_ensemble(const Ensemble& e, const std::vector<Pattern>& patterns,
                                    const std::vector<bool>& is_target) {
    if (patterns.size() != is_target.size())
        throw EvaluationError("evaluate_ensemble: label count mismatch");
    EvaluationSummary s;
    s.memberships.reserve(patterns.size());
    s.predictions.reserve(patterns.size());
    for (const auto& x : patterns) {
        const Decision d = ensemble_classify(x, e);
        s.predictions.push_back(d.target);
        s.memberships.push_back(d.membership);
    }
    s.counts = count_confusion(s.predictions, is_target);
    s.metrics = confusion_metrics(s.counts);
    s.fuzzy_entropy = fuzzy_entropy(s.memberships);
    const bool has_pos = std::find(is_target.begin(), is_target.end(), true) != is_target.end();
    const bool has_neg = std::find(is_target.begin(), is_target.end(), false) != is_target.end();
    if (has_pos && has_neg) s.auc = roc_auc(s.memberships, is_target).auc;
    return s;
}

// ---------------------------------------------------------------------------
// Three-Gaussian demonstration
// ---------------------------------------------------------------------------

GaussianExperimentConfig::GaussianExperimentConfig() {
    data.centers = {{0.2, 0.2}, {0.5, 0.8}, {0.8, 0.3}};
    data.spreads = {0.03, 0.03, 0.03};
    data.train_targets = 150;
    data.validation_targets = 150;
    data.test_targets = 150;
    data.nontargets = 0;
    data.seed = 42;
    ga.k_min = 3;
    ga.k_max = 3;
    ga.seed = 42;
}

GaussianExperimentResult run_gaussian_experiment(const GaussianExperimentConfig& cfg) {
    const SyntheticProblem prob = generate_gaussian_clusters(cfg.data);
    OccTrainer trainer(prob.schema, prob.train, prob.validation, prob.validation_is_target,
                       cfg.extent, identity_stats(prob.schema));
    GaussianExperimentResult out;
    out.training = trainer.train(cfg.ga);

    const Ensemble& e = out.training.ensemble;
    for (const auto& model : e.replicates) {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < prob.test.size(); ++i)
            if (hard_classify(prob.test[i], model) == static_cast<bool>(prob.test_is_target[i]))
                ++correct;
        out.replicate_test_accuracy.push_back(static_cast<double>(correct) /
                                              static_cast<double>(prob.test.size()));
    }
    const EvaluationSummary s = evaluate_ensemble(e, prob.test, prob.test_is_target);
    out.voted_test_accuracy = s.metrics.accuracy;
    out.selected_replicate = e.selected;
    for (const auto& rep : out.training.per_k)
        if (rep.k == out.training.chosen_k) out.selected_validation_fe = rep.validation_fuzzy_entropy;
    return out;
}

// ---------------------------------------------------------------------------
// Implicit-FPR study
// ---------------------------------------------------------------------------

ImplicitFprConfig::ImplicitFprConfig() {
    ga.k_min = 3;
    ga.k_max = 3;
}

double ImplicitFprConfig::spread_for_ratio(double ratio) const {
    // Decision regions snap to the farthest member of each cluster, so the
    // covered area grows like spread^2 * log(cluster size). Scaling the
    // spread this way keeps area ~ ratio across the sweep.
    const double base_ratio = 0.1;
    const double per_cluster = static_cast<double>(nontargets) / static_cast<double>(centers.size());
    const double n0 = std::max(2.0, base_ratio * per_cluster);
    const double n1 = std::max(2.0, ratio * per_cluster);
    return base_spread * std::sqrt((ratio / base_ratio) * (std::log(n0) / std::log(n1)));
}

ImplicitFprResult run_implicit_fpr_experiment(std::span<const double> ratios,
                                              const ImplicitFprConfig& cfg, std::uint64_t seed) {
    if (ratios.size() < 2)
        throw EvaluationError("implicit-FPR experiment needs at least two ratios");
    for (double r : ratios)
        if (!(r > 0.0)) throw EvaluationError("implicit-FPR ratios must be positive");

    ImplicitFprResult out;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double ratio = ratios[i];
        const auto n_targets =
            static_cast<std::size_t>(std::llround(ratio * static_cast<double>(cfg.nontargets)));

        SyntheticSpec spec;
        spec.centers = cfg.centers;
        spec.spreads.assign(cfg.centers.size(), cfg.spread_for_ratio(ratio));
        spec.train_targets = n_targets;
        spec.validation_targets = n_targets;
        spec.test_targets = n_targets;
        spec.nontargets = cfg.nontargets;
        spec.seed = derive_seed(seed, {21, i});

        const SyntheticProblem prob = generate_gaussian_clusters(spec);
        OccTrainer trainer(prob.schema, prob.train, prob.validation, prob.validation_is_target,
                           cfg.extent, identity_stats(prob.schema));
        GaConfig ga = cfg.ga;
        ga.seed = derive_seed(seed, {22, i});
        const TrainResult trained = trainer.train(ga);
        const EvaluationSummary s = evaluate_ensemble(trained.ensemble, prob.test, prob.test_is_target);

        ImplicitFprPoint p;
        p.ratio = ratio;
        p.targets = n_targets;
        p.fpr = s.metrics.fpr;
        p.recall = s.metrics.recall;
        p.accuracy = s.metrics.accuracy;
        p.auc = s.auc.value_or(0.0);
        p.fuzzy_entropy = s.fuzzy_entropy;
        out.points.push_back(p);
    }

    std::vector<double> xs, ys;
    for (const auto& p : out.points) {
        xs.push_back(p.ratio);
        ys.push_back(p.fpr);
    }
    out.correlation = pearson_correlation(xs, ys);
    return out;
}

// ---------------------------------------------------------------------------
// Labeled tabular benchmarks
// ---------------------------------------------------------------------------

BenchmarkResult run_benchmark(const BenchmarkDataset& dataset, const GaConfig& base,
                              std::span<const std::uint64_t> seeds) {
    const LoadedDataset ds = load_dataset(dataset.data_path, dataset.schema_path);

    std::vector<std::size_t> target_idx, nontarget_idx;
    for (std::size_t i = 0; i < ds.patterns.size(); ++i)
        (ds.is_target[i] ? target_idx : nontarget_idx).push_back(i);
    if (target_idx.size() < 8 || nontarget_idx.size() < 2)
        throw EvaluationError(dataset.name + ": not enough patterns per class");

    BenchmarkResult out;
    out.name = dataset.name;
    for (std::uint64_t run_seed : seeds) {
        auto targets = target_idx;
        auto nontargets = nontarget_idx;
        Rng shuffler(derive_seed(run_seed, {31}));
        for (std::size_t i = targets.size(); i > 1; --i)
            std::swap(targets[i - 1], targets[shuffler.uniform_index(i)]);
        for (std::size_t i = nontargets.size(); i > 1; --i)
            std::swap(nontargets[i - 1], nontargets[shuffler.uniform_index(i)]);

        const std::size_t n_tr = targets.size() / 2;
        const std::size_t n_vs = targets.size() / 4;
        const std::size_t nt_vs = nontargets.size() / 2;

        std::vector<Pattern> train, validation, test;
        std::vector<bool> val_target, test_target;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (i < n_tr)
                train.push_back(ds.patterns[targets[i]]);
            else if (i < n_tr + n_vs) {
                validation.push_back(ds.patterns[targets[i]]);
                val_target.push_back(true);
            } else {
                test.push_back(ds.patterns[targets[i]]);
                test_target.push_back(true);
            }
        }
        for (std::size_t i = 0; i < nontargets.size(); ++i) {
            if (i < nt_vs) {
                validation.push_back(ds.patterns[nontargets[i]]);
                val_target.push_back(false);
            } else {
                test.push_back(ds.patterns[nontargets[i]]);
                test_target.push_back(false);
            }
        }

        OccTrainer trainer(ds.schema, train, validation, val_target, ExtentStrategy::mean, ds.stats);
        GaConfig ga = base;
        ga.k_min = dataset.k_min;
        ga.k_max = std::min(dataset.k_max, train.size());
        ga.seed = run_seed;
        const TrainResult trained = trainer.train(ga);
        const EvaluationSummary s = evaluate_ensemble(trained.ensemble, test, test_target);
        out.auc_per_seed.push_back(s.auc.value_or(0.0));
    }

    const double n = static_cast<double>(out.auc_per_seed.size());
    out.mean_auc = std::accumulate(out.auc_per_seed.begin(), out.auc_per_seed.end(), 0.0) / n;
    double var = 0.0;
    for (double a : out.auc_per_seed) var += (a - out.mean_auc) * (a - out.mean_auc);
    out.std_auc = std::sqrt(var / n);
    return out;
}

// ---------------------------------------------------------------------------
// Heterogeneous-schema synthetic problem
// ---------------------------------------------------------------------------

HeterogeneousExperimentResult run_heterogeneous_experiment(const HeterogeneousSpec& spec,
                                                           const GaConfig& ga) {
    const SyntheticProblem prob = generate_heterogeneous_clusters(spec);
    OccTrainer trainer(prob.schema, prob.train, prob.validation, prob.validation_is_target,
                       ExtentStrategy::mean, identity_stats(prob.schema));
    HeterogeneousExperimentResult out;
    out.training = trainer.train(ga);
    out.chosen_k = out.training.chosen_k;
    out.test = evaluate_ensemble(out.training.ensemble, prob.test, prob.test_is_target);

    for (const auto& rep : out.training.per_k) {
        if (rep.k != out.training.chosen_k) continue;
        out.fitness_entropy_mi = rep.fitness_entropy_mi;
        out.trace_nondecreasing = true;
        for (std::size_t i = 1; i < rep.trace.best_fitness.size(); ++i)
            if (rep.trace.best_fitness[i] < rep.trace.best_fitness[i - 1])
                out.trace_nondecreasing = false;
    }
    return out;
}

}  // namespace occ
