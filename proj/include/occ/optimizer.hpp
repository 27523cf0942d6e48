#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "occ/classifier.hpp"
#include "occ/clustering.hpp"
#include "occ/feature_space.hpp"

namespace occ {

class OptimizerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// GA individual: per-feature weights in [0,1] and per-cluster tolerances in
/// [0, sigma_max].
struct Genome {
    std::vector<double> weights;
    std::vector<double> tolerances;

    bool operator==(const Genome&) const = default;
};

struct GaConfig {
    std::size_t population = 50;
    double crossover_fraction = 0.8;
    std::size_t elite_count = 2;
    std::size_t max_generations = 250;
    std::size_t stall_generations = 50;
    double stall_tolerance = 1e-6;
    double alpha = 0.8;
    double sigma_max = 0.5;
    bool normalize_sigma_term = false;   ///< divide the tolerance term by k
    std::size_t k_min = 1;
    std::size_t k_max = 1;
    std::uint64_t seed = 0;
};

/// Per-generation best fitness and the weight entropy of the best genome.
struct TrainingTrace {
    std::vector<double> best_fitness;
    std::vector<double> best_weight_entropy;
};

struct KReport {
    std::size_t k = 0;
    double best_fitness = 0.0;
    double validation_accuracy = 0.0;
    double validation_fuzzy_entropy = 0.0;
    std::size_t selected_replicate = 0;
    std::optional<double> fitness_entropy_mi;   ///< MI(best fitness, weight entropy) over the trace
    Genome genome;
    TrainingTrace trace;
};

struct TrainResult {
    Ensemble ensemble;
    std::size_t chosen_k = 0;
    std::vector<KReport> per_k;
};

/// Trains the cluster model end to end: k-medoids replicates under a genome's
/// weights, objective evaluation against the validation split, GA evolution
/// and the final k sweep. Precomputes per-feature dissimilarity components
/// once, so probing a genome costs dot products rather than kernel calls.
class OccTrainer {
public:
    OccTrainer(FeatureSchema schema, std::vector<Pattern> train, std::vector<Pattern> validation,
               std::vector<bool> validation_is_target, ExtentStrategy extent = ExtentStrategy::mean,
               NormalizationStats stats = {});

    /// alpha * A + (1-alpha) * sum_i (1 - sigma_i), where A is the validation
    /// accuracy averaged over the three clustering replicates.
    double fitness(const Genome& genome, std::size_t k, const GaConfig& cfg) const;

    /// Seeded GA: stochastic-uniform selection over rank expectations,
    /// scattered crossover on the crossover fraction of offspring, Gaussian
    /// mutation with a linearly shrinking scale for the rest, two elites.
    std::pair<Genome, TrainingTrace> evolve(const GaConfig& cfg, std::size_t k) const;

    /// Full k sweep; the returned ensemble belongs to the k with the best
    /// validation accuracy (ties: lower fuzzy entropy, then lower k).
    TrainResult train(const GaConfig& cfg) const;

    /// Three replicate models for a genome, plus the fuzzy-entropy selection
    /// over their validation memberships.
    Ensemble build_ensemble(const Genome& genome, std::size_t k, std::uint64_t seed) const;

    /// Validation memberships of one trained replicate (used for reporting).
    std::vector<double> validation_memberships(const OccModel& model) const;

    const FeatureSchema& schema() const { return schema_; }
    const std::vector<Pattern>& training_set() const { return train_; }
    const TsNormalizer& ts_normalizer() const { return ts_norm_; }

    static std::uint64_t replicate_seed(std::uint64_t seed, std::size_t k, std::size_t replica);

private:
    struct Replicate {
        Partition partition;
        std::vector<double> extents;
    };
    struct ReplicateEval {
        double accuracy = 0.0;
        std::vector<double> memberships;
        std::vector<bool> predictions;
    };

    Replicate train_replicate(std::span<const double> w, std::size_t k, std::uint64_t seed) const;
    ReplicateEval evaluate_replicate(const Replicate& rep, const Genome& genome) const;

    FeatureSchema schema_;
    std::vector<Pattern> train_;
    std::vector<Pattern> validation_;
    std::vector<bool> validation_is_target_;
    ExtentStrategy extent_;
    NormalizationStats stats_;
    TsNormalizer ts_norm_;
    ComponentCache train_cache_;
    ComponentCache validation_cache_;
};

// Spec-shaped convenience wrappers (build a trainer with the default extent).
double fitness(const Genome& genome, const FeatureSchema& schema, const std::vector<Pattern>& train,
               const std::vector<Pattern>& validation, const std::vector<bool>& validation_is_target,
               std::size_t k, double alpha, std::uint64_t seed = 0);

std::pair<Genome, TrainingTrace> evolve(const GaConfig& cfg, const FeatureSchema& schema,
                                        const std::vector<Pattern>& train,
                                        const std::vector<Pattern>& validation,
                                        const std::vector<bool>& validation_is_target, std::size_t k);

TrainResult train_occ(const GaConfig& cfg, const FeatureSchema& schema,
                      const std::vector<Pattern>& train, const std::vector<Pattern>& validation,
                      const std::vector<bool>& validation_is_target,
                      ExtentStrategy extent = ExtentStrategy::mean);

}  // namespace occ
