#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "occ/feature_space.hpp"
#include "occ/rand.hpp"

namespace occ {

class ClusteringError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hard partition of order k: disjoint, non-empty clusters covering the
/// dataset, each summarized by a member acting as representative.
struct Partition {
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<std::size_t> representatives;   ///< representatives[i] is a member of clusters[i]

    std::size_t order() const { return clusters.size(); }
};

enum class ExtentStrategy { mean, max, stddev };

std::string_view to_string(ExtentStrategy s);
ExtentStrategy extent_strategy_from_string(std::string_view s);

/// Member minimizing the sum of dissimilarities to all cluster members.
/// Ties break to the lowest member index.
template <class Diss>
std::size_t minsod_representative(std::span<const std::size_t> members, Diss&& d) {
    if (members.empty()) throw ClusteringError("minsod_representative: empty cluster");
    std::size_t best = members[0];
    double best_sod = std::numeric_limits<double>::infinity();
    for (std::size_t j : members) {
        double sod = 0.0;
        for (std::size_t k : members) sod += d(j, k);
        if (sod < best_sod) {
            best_sod = sod;
            best = j;
        }
    }
    return best;
}

/// Scalar measure of cluster spread around the representative. The mean form
/// divides the member-distance sum (which includes the representative's zero
/// term) by |C|-1; singletons have extent 0.
template <class Diss>
double cluster_extent(std::span<const std::size_t> members, std::size_t representative,
                      ExtentStrategy strategy, Diss&& d) {
    if (members.empty()) throw ClusteringError("cluster_extent: empty cluster");
    if (members.size() == 1) return 0.0;
    std::vector<double> dist;
    dist.reserve(members.size());
    for (std::size_t j : members) dist.push_back(d(representative, j));
    switch (strategy) {
        case ExtentStrategy::mean: {
            double sum = 0.0;
            for (double v : dist) sum += v;
            return sum / static_cast<double>(members.size() - 1);
        }
        case ExtentStrategy::max:
            return *std::max_element(dist.begin(), dist.end());
        case ExtentStrategy::stddev: {
            double mean = 0.0;
            for (double v : dist) mean += v;
            mean /= static_cast<double>(dist.size());
            double var = 0.0;
            for (double v : dist) var += (v - mean) * (v - mean);
            return std::sqrt(var / static_cast<double>(dist.size() - 1));
        }
    }
    throw ClusteringError("unknown extent strategy");
}

/// k-medoids: fast randomized initialization (squared-distance sampling, so
/// well-separated structures get one seed each), then alternate nearest-
/// representative assignment and MinSOD representative updates until the
/// representatives are stable (at most 100 iterations). Clusters emptied by
/// an assignment step are reseeded with the pattern farthest from their
/// stale representative.
template <class Diss>
Partition k_medoids(std::size_t n, std::size_t k, std::uint64_t seed, Diss&& d) {
    if (k < 1 || k > n) throw ClusteringError("k_medoids: k out of range");

    // First representative uniform, the rest sampled proportionally to the
    // squared dissimilarity from the nearest one already chosen. Falls back
    // to uniform among the unchosen when all remaining distances are zero.
    Rng rng(seed);
    std::vector<std::size_t> reps(k);
    std::vector<double> nearest_sq(n, 0.0);
    std::vector<bool> chosen(n, false);
    reps[0] = rng.uniform_index(n);
    chosen[reps[0]] = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double di = d(i, reps[0]);
        nearest_sq[i] = di * di;
    }
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!chosen[i]) total += nearest_sq[i];
        std::size_t pick = n;
        if (total > 0.0) {
            double ticket = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i]) continue;
                ticket -= nearest_sq[i];
                if (ticket <= 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        if (pick == n) {
            std::size_t skip = rng.uniform_index(n - c);
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i]) continue;
                if (skip == 0) {
                    pick = i;
                    break;
                }
                --skip;
            }
        }
        reps[c] = pick;
        chosen[pick] = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double di = d(i, pick);
            nearest_sq[i] = std::min(nearest_sq[i], di * di);
        }
    }

    Partition part;
    std::vector<std::size_t> assign(n);
    for (int iter = 0; iter < 100; ++iter) {
        // Assignment: nearest representative, ties to the lowest cluster index.
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = d(i, reps[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double dc = d(i, reps[c]);
                if (dc < best_d) {
                    best_d = dc;
                    best = c;
                }
            }
            assign[i] = best;
        }

        std::vector<std::vector<std::size_t>> clusters(k);
        for (std::size_t i = 0; i < n; ++i) clusters[assign[i]].push_back(i);

        // Repair: reseed each empty cluster with the pattern farthest from its
        // stale representative, stealing only from clusters that keep >= 2
        // members and never stealing a representative.
        for (std::size_t c = 0; c < k; ++c) {
            if (!clusters[c].empty()) continue;
            std::size_t farthest = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (clusters[assign[i]].size() < 2) continue;
                if (std::find(reps.begin(), reps.end(), i) != reps.end()) continue;
                const double di = d(i, reps[c]);
                if (di > far_d) {
                    far_d = di;
                    farthest = i;
                }
            }
            if (farthest == n) throw ClusteringError("k_medoids: cannot repair empty cluster");
            auto& donor = clusters[assign[farthest]];
            donor.erase(std::find(donor.begin(), donor.end(), farthest));
            assign[farthest] = c;
            clusters[c].push_back(farthest);
            reps[c] = farthest;
        }

        // MinSOD representative update.
        std::vector<std::size_t> new_reps(k);
        for (std::size_t c = 0; c < k; ++c)
            new_reps[c] = minsod_representative<Diss&>(clusters[c], d);

        const bool stable = new_reps == reps;
        reps = std::move(new_reps);
        part.clusters = std::move(clusters);
        if (stable) break;
    }
    part.representatives = reps;
    return part;
}

/// Convenience overload over patterns and the composite dissimilarity.
Partition k_medoids(const FeatureSchema& schema, const std::vector<Pattern>& dataset, std::size_t k,
                    std::span<const double> w, const TsNormalizer& norm, std::uint64_t seed);

std::size_t minsod_representative(const FeatureSchema& schema, const std::vector<Pattern>& dataset,
                                  std::span<const std::size_t> members, std::span<const double> w,
                                  const TsNormalizer& norm);

}  // namespace occ
