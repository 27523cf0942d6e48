#include "occ/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "occ/evaluation.hpp"
#include "occ/rand.hpp"

namespace occ {

namespace {

constexpr std::uint64_t kTagReplicate = 0xA1;
constexpr std::uint64_t kTagInit = 0xB2;
constexpr std::uint64_t kTagChild = 0xC3;
constexpr std::uint64_t kTagSelect = 0xD4;

void run_parallel(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1 || count < 4) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::uint64_t OccTrainer::replicate_seed(std::uint64_t seed, std::size_t k, std::size_t replica) {
    return derive_seed(seed, {kTagReplicate, k, replica});
}

OccTrainer::OccTrainer(FeatureSchema schema, std::vector<Pattern> train,
                       std::vector<Pattern> validation, std::vector<bool> validation_is_target,
                       ExtentStrategy extent, NormalizationStats stats)
    : schema_(std::move(schema)),
      train_(std::move(train)),
      validation_(std::move(validation)),
      validation_is_target_(std::move(validation_is_target)),
      extent_(extent),
      stats_(std::move(stats)),
      ts_norm_(fit_ts_normalizer(schema_, train_)),
      train_cache_(schema_, train_, train_, ts_norm_),
      validation_cache_(schema_, validation_, train_, ts_norm_) {
    if (train_.empty()) throw OptimizerError("empty training set");
    if (validation_.empty()) throw OptimizerError("empty validation set");
    if (validation_.size() != validation_is_target_.size())
        throw OptimizerError("validation labels do not match validation set");
}

OccTrainer::Replicate OccTrainer::train_replicate(std::span<const double> w, std::size_t k,
                                                  std::uint64_t seed) const {
    Replicate rep;
    rep.partition = k_medoids(train_.size(), k, seed, [&](std::size_t i, std::size_t j) {
        return train_cache_.weighted(i, j, w);
    });
    rep.extents.reserve(k);
    for (std::size_t c = 0; c < k; ++c)
        rep.extents.push_back(cluster_extent(
            std::span<const std::size_t>(rep.partition.clusters[c]), rep.partition.representatives[c],
            extent_, [&](std::size_t i, std::size_t j) { return train_cache_.weighted(i, j, w); }));
    return rep;
}

OccTrainer::ReplicateEval OccTrainer::evaluate_replicate(const Replicate& rep,
                                                         const Genome& genome) const {
    const std::size_t k = rep.partition.order();
    const std::size_t n_val = validation_.size();
    ReplicateEval ev;
    ev.memberships.resize(n_val);
    ev.predictions.resize(n_val);
    std::size_t correct = 0;
    for (std::size_t l = 0; l < n_val; ++l) {
        std::size_t best = 0;
        double best_d = validation_cache_.weighted(l, rep.partition.representatives[0], genome.weights);
        for (std::size_t c = 1; c < k; ++c) {
            const double d =
                validation_cache_.weighted(l, rep.partition.representatives[c], genome.weights);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        const double delta = rep.extents[best];
        const double sigma = genome.tolerances[best];
        const bool accept = best_d <= delta + sigma;
        ev.predictions[l] = accept;
        ev.memberships[l] = sigmoid_membership(best_d, delta, delta + sigma / 2.0);
        if (accept == static_cast<bool>(validation_is_target_[l])) ++correct;
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(n_val);
    return ev;
}

double OccTrainer::fitness(const Genome& genome, std::size_t k, const GaConfig& cfg) const {
    if (genome.weights.size() != schema_.arity() || genome.tolerances.size() != k)
        throw OptimizerError("fitness: genome arity mismatch");
    double acc = 0.0;
    for (std::size_t r = 0; r < 3; ++r) {
        const Replicate rep = train_replicate(genome.weights, k, replicate_seed(cfg.seed, k, r));
        acc += evaluate_replicate(rep, genome).accuracy;
    }
    acc /= 3.0;
    double tol_term = 0.0;
    for (double s : genome.tolerances) tol_term += 1.0 - s;
    if (cfg.normalize_sigma_term) tol_term /= static_cast<double>(k);
    return cfg.alpha * acc + (1.0 - cfg.alpha) * tol_term;
}

Ensemble OccTrainer::build_ensemble(const Genome& genome, std::size_t k, std::uint64_t seed) const {
    Ensemble e;
    std::vector<std::vector<double>> memberships;
    for (std::size_t r = 0; r < 3; ++r) {
        const Replicate rep = train_replicate(genome.weights, k, replicate_seed(seed, k, r));
        OccModel m;
        m.schema = schema_;
        m.weights = genome.weights;
        m.ts_norm = ts_norm_;
        m.stats = stats_;
        m.extent_strategy = extent_;
        m.clusters.reserve(k);
        for (std::size_t c = 0; c < k; ++c)
            m.clusters.push_back(ClusterRegion{train_[rep.partition.representatives[c]],
                                               rep.extents[c], genome.tolerances[c]});
        memberships.push_back(evaluate_replicate(rep, genome).memberships);
        e.replicates.push_back(std::move(m));
    }
    e.selected = select_replicate(memberships);
    return e;
}

std::vector<double> OccTrainer::validation_memberships(const OccModel& model) const {
    std::vector<double> out;
    out.reserve(validation_.size());
    for (const auto& x : validation_) out.push_back(membership(x, model));
    return out;
}

// ---------------------------------------------------------------------------
// Genetic algorithm
// ---------------------------------------------------------------------------

namespace {

struct Individual {
    Genome genome;
    double fitness = 0.0;
};

/// Stochastic uniform (SUS) draw of `count` parents over rank-scaled
/// expectations (1/sqrt(rank)), followed by a shuffle so mating is not
/// assortative. `by_rank` lists population indices best-first.
std::vector<std::size_t> select_parents(const std::vector<std::size_t>& by_rank, std::size_t count,
                                        Rng& rng) {
    const std::size_t n = by_rank.size();
    std::vector<double> expectation(n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        expectation[r] = 1.0 / std::sqrt(static_cast<double>(r + 1));
        total += expectation[r];
    }
    const double step = total / static_cast<double>(count);
    double pointer = rng.uniform() * step;
    std::vector<std::size_t> parents;
    parents.reserve(count);
    double cumulative = 0.0;
    std::size_t r = 0;
    for (std::size_t p = 0; p < count; ++p) {
        const double target = pointer + step * static_cast<double>(p);
        while (r < n && cumulative + expectation[r] < target) cumulative += expectation[r++];
        parents.push_back(by_rank[std::min(r, n - 1)]);
    }
    for (std::size_t i = parents.size(); i > 1; --i)
        std::swap(parents[i - 1], parents[rng.uniform_index(i)]);
    return parents;
}

Genome scattered_crossover(const Genome& a, const Genome& b, Rng& rng) {
    Genome child = a;
    for (std::size_t j = 0; j < child.weights.size(); ++j)
        if (rng.next() & 1u) child.weights[j] = b.weights[j];
    for (std::size_t j = 0; j < child.tolerances.size(); ++j)
        if (rng.next() & 1u) child.tolerances[j] = b.tolerances[j];
    return child;
}

Genome gaussian_mutation(const Genome& parent, double scale, double sigma_max, Rng& rng) {
    Genome child = parent;
    for (auto& w : child.weights) w = std::clamp(w + scale * rng.normal(), 0.0, 1.0);
    for (auto& s : child.tolerances)
        s = std::clamp(s + scale * sigma_max * rng.normal(), 0.0, sigma_max);
    return child;
}

}  // namespace

std::pair<Genome, TrainingTrace> OccTrainer::evolve(const GaConfig& cfg, std::size_t k) const {
    if (cfg.population < cfg.elite_count) throw OptimizerError("population smaller than elite count");
    if (cfg.crossover_fraction < 0.0 || cfg.crossover_fraction > 1.0)
        throw OptimizerError("crossover fraction outside [0,1]");
    const std::size_t m = schema_.arity();
    const std::size_t pop_size = cfg.population;

    std::vector<Individual> pop(pop_size);
    {
        Rng init(derive_seed(cfg.seed, {kTagInit, k}));
        for (auto& ind : pop) {
            ind.genome.weights.resize(m);
            ind.genome.tolerances.resize(k);
            for (auto& w : ind.genome.weights) w = init.uniform();
            for (auto& s : ind.genome.tolerances) s = init.uniform(0.0, cfg.sigma_max);
        }
    }
    run_parallel(pop_size, [&](std::size_t i) { pop[i].fitness = fitness(pop[i].genome, k, cfg); });

    TrainingTrace trace;
    const auto best_index = [&] {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pop_size; ++i)
            if (pop[i].fitness > pop[best].fitness) best = i;
        return best;
    };
    const auto record = [&] {
        const std::size_t best = best_index();
        trace.best_fitness.push_back(pop[best].fitness);
        trace.best_weight_entropy.push_back(m >= 2 ? weight_entropy(pop[best].genome.weights) : 0.0);
    };
    record();

    const std::size_t elite = std::min(cfg.elite_count, pop_size);
    const std::size_t n_children = pop_size - elite;
    const auto n_cross = static_cast<std::size_t>(
        std::llround(cfg.crossover_fraction * static_cast<double>(n_children)));
    const std::size_t n_mut = n_children - n_cross;

    for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen) {
        // Stall: best fitness gained less than the tolerance over the window.
        if (trace.best_fitness.size() > cfg.stall_generations) {
            const double now = trace.best_fitness.back();
            const double then =
                trace.best_fitness[trace.best_fitness.size() - 1 - cfg.stall_generations];
            if (now - then < cfg.stall_tolerance) break;
        }

        std::vector<std::size_t> by_rank(pop_size);
        std::iota(by_rank.begin(), by_rank.end(), 0);
        std::stable_sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
            return pop[a].fitness > pop[b].fitness;
        });

        Rng sel(derive_seed(cfg.seed, {kTagSelect, k, gen}));
        const auto parents = select_parents(by_rank, 2 * n_cross + n_mut, sel);

        const double scale =
            0.1 + (0.01 - 0.1) * static_cast<double>(gen - 1) /
                      static_cast<double>(std::max<std::size_t>(cfg.max_generations - 1, 1));

        std::vector<Individual> next(pop_size);
        for (std::size_t e = 0; e < elite; ++e) next[e] = pop[by_rank[e]];
        run_parallel(n_children, [&](std::size_t c) {
            Rng rng(derive_seed(cfg.seed, {kTagChild, k, gen, c}));
            Genome g = c < n_cross
                           ? scattered_crossover(pop[parents[2 * c]].genome,
                                                 pop[parents[2 * c + 1]].genome, rng)
                           : gaussian_mutation(pop[parents[n_cross + c]].genome, scale,
                                               cfg.sigma_max, rng);
            next[elite + c].fitness = fitness(g, k, cfg);
            next[elite + c].genome = std::move(g);
        });
        pop = std::move(next);
        record();
    }

    return {pop[best_index()].genome, std::move(trace)};
}

TrainResult OccTrainer::train(const GaConfig& cfg) const {
    if (cfg.k_min < 1 || cfg.k_min > cfg.k_max || cfg.k_max > train_.size())
        throw OptimizerError("infeasible k range");

    TrainResult result;
    bool have_choice = false;
    std::size_t chosen_idx = 0;
    for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
        auto [genome, trace] = evolve(cfg, k);
        Ensemble e = build_ensemble(genome, k, cfg.seed);

        // Voted hard decisions and selected-replicate memberships on validation.
        std::vector<std::vector<bool>> votes;
        std::vector<std::vector<double>> memberships;
        for (std::size_t r = 0; r < e.replicates.size(); ++r) {
            const Replicate rep = train_replicate(genome.weights, k, replicate_seed(cfg.seed, k, r));
            const auto ev = evaluate_replicate(rep, genome);
            votes.push_back(ev.predictions);
            memberships.push_back(ev.memberships);
        }
        std::size_t correct = 0;
        for (std::size_t l = 0; l < validation_.size(); ++l) {
            std::size_t v = 0;
            for (const auto& pred : votes) v += pred[l] ? 1 : 0;
            const bool accept = 2 * v > votes.size();
            if (accept == static_cast<bool>(validation_is_target_[l])) ++correct;
        }

        KReport report;
        report.k = k;
        report.best_fitness = trace.best_fitness.back();
        report.validation_accuracy = static_cast<double>(correct) / static_cast<double>(validation_.size());
        report.selected_replicate = e.selected;
        report.validation_fuzzy_entropy = fuzzy_entropy(memberships[e.selected]);
        if (trace.best_fitness.size() >= 10)
            report.fitness_entropy_mi = mutual_information(trace.best_fitness, trace.best_weight_entropy);
        report.genome = genome;
        report.trace = std::move(trace);

        const bool better =
            !have_choice ||
            report.validation_accuracy > result.per_k[chosen_idx].validation_accuracy ||
            (report.validation_accuracy == result.per_k[chosen_idx].validation_accuracy &&
             report.validation_fuzzy_entropy < result.per_k[chosen_idx].validation_fuzzy_entropy);
        result.per_k.push_back(std::move(report));
        if (better) {
            result.chosen_k = k;
            chosen_idx = result.per_k.size() - 1;
            result.ensemble = std::move(e);
            have_choice = true;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Spec-shaped wrappers
// ---------------------------------------------------------------------------

double fitness(const Genome& genome, const FeatureSchema& schema, const std::vector<Pattern>& train,
               const std::vector<Pattern>& validation, const std::vector<bool>& validation_is_target,
               std::size_t k, double alpha, std::uint64_t seed) {
    OccTrainer trainer(schema, train, validation, validation_is_target);
    GaConfig cfg;
    cfg.alpha = alpha;
    cfg.seed = seed;
    return trainer.fitness(genome, k, cfg);
}

std::pair<Genome, TrainingTrace> evolve(const GaConfig& cfg, const FeatureSchema& schema,
                                        const std::vector<Pattern>& train,
                                        const std::vector<Pattern>& validation,
                                        const std::vector<bool>& validation_is_target,
                                        std::size_t k) {
    OccTrainer trainer(schema, train, validation, validation_is_target);
    return trainer.evolve(cfg, k);
}

TrainResult train_occ(const GaConfig& cfg, const FeatureSchema& schema,
                      const std::vector<Pattern>& train, const std::vector<Pattern>& validation,
                      const std::vector<bool>& validation_is_target, ExtentStrategy extent) {
    OccTrainer trainer(schema, train, validation, validation_is_target, extent);
    return trainer.train(cfg);
}

}  // namespace occ
