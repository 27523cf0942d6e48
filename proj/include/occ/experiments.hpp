#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occ/evaluation.hpp"
#include "occ/optimizer.hpp"
#include "occ/preprocessing.hpp"

namespace occ {

/// Hard/soft test-set summary of a trained ensemble: voted confusion metrics,
/// AUC over the selected replicate's memberships (when both classes are
/// present) and the fuzzy entropy of those memberships.
struct EvaluationSummary {
    ConfusionCounts counts;
    ConfusionMetrics metrics;
    std::optional<double> auc;
    double fuzzy_entropy = 0.0;
    std::vector<double> memberships;
    std::vector<bool> predictions;
};

EvaluationSummary evaluate_ensemble(const Ensemble& e, const std::vector<Pattern>& patterns,
                                    const std::vector<bool>& is_target);

// ---------------------------------------------------------------------------
// Three-Gaussian demonstration: well-separated target clusters, no
// non-targets, k = 3.
// ---------------------------------------------------------------------------

struct GaussianExperimentConfig {
    SyntheticSpec data;
    GaConfig ga;
    ExtentStrategy extent = ExtentStrategy::mean;

    GaussianExperimentConfig();
};

struct GaussianExperimentResult {
    std::vector<double> replicate_test_accuracy;
    double voted_test_accuracy = 0.0;
    double selected_validation_fe = 0.0;
    std::size_t selected_replicate = 0;
    TrainResult training;
};

GaussianExperimentResult run_gaussian_experiment(const GaussianExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Implicit-FPR study: Gaussian targets against uniform non-targets, sweeping
// the |S_tr| / |non-target test| ratio.
// ---------------------------------------------------------------------------

struct ImplicitFprConfig {
    std::vector<std::array<double, 2>> centers = {{0.2, 0.2}, {0.5, 0.8}, {0.8, 0.3}};
    double base_spread = 0.034;     ///< cluster spread at ratio 0.1
    std::size_t nontargets = 1500;  ///< per validation/test split
    GaConfig ga;
    ExtentStrategy extent = ExtentStrategy::max;

    ImplicitFprConfig();

    /// Spread grows with the ratio so the decision regions keep covering a
    /// domain fraction close to the ratio itself.
    double spread_for_ratio(double ratio) const;
};

struct ImplicitFprPoint {
    double ratio = 0.0;
    std::size_t targets = 0;
    double fpr = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double auc = 0.0;
    double fuzzy_entropy = 0.0;
};

struct ImplicitFprResult {
    std::vector<ImplicitFprPoint> points;
    double correlation = 0.0;   ///< Pearson(ratio, FPR)
};

/// Requires at least two ratios (the correlation is undefined otherwise).
ImplicitFprResult run_implicit_fpr_experiment(std::span<const double> ratios,
                                              const ImplicitFprConfig& cfg, std::uint64_t seed);

// ---------------------------------------------------------------------------
// One-class benchmarks on labeled tabular datasets.
// ---------------------------------------------------------------------------

struct BenchmarkDataset {
    std::string name;
    std::filesystem::path data_path;
    std::filesystem::path schema_path;
    std::size_t k_min = 1;
    std::size_t k_max = 4;
};

struct BenchmarkResult {
    std::string name;
    std::vector<double> auc_per_seed;
    double mean_auc = 0.0;
    double std_auc = 0.0;
};

/// Target/non-target split per seed: targets 50/25/25 into train/validation/
/// test, non-targets halved into validation/test. Reports test AUC per seed.
BenchmarkResult run_benchmark(const BenchmarkDataset& dataset, const GaConfig& base,
                              std::span<const std::uint64_t> seeds);

// ---------------------------------------------------------------------------
// Heterogeneous-schema synthetic problem over all five feature kinds.
// ---------------------------------------------------------------------------

struct HeterogeneousExperimentResult {
    std::size_t chosen_k = 0;
    EvaluationSummary test;
    bool trace_nondecreasing = false;
    std::optional<double> fitness_entropy_mi;
    TrainResult training;
};

HeterogeneousExperimentResult run_heterogeneous_experiment(const HeterogeneousSpec& spec,
                                                           const GaConfig& ga);

}  // namespace occ
