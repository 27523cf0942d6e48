#include "occ/clustering.hpp"

namespace occ {

std::string_view to_string(ExtentStrategy s) {
    switch (s) {
        case ExtentStrategy::mean: return "mean";
        case ExtentStrategy::max: return "max";
        case ExtentStrategy::stddev: return "std";
    }
    throw ClusteringError("unknown extent strategy");
}

ExtentStrategy extent_strategy_from_string(std::string_view s) {
    if (s == "mean") return ExtentStrategy::mean;
    if (s == "max") return ExtentStrategy::max;
    if (s == "std" || s == "stddev") return ExtentStrategy::stddev;
    throw ClusteringError("unknown extent strategy: " + std::string(s));
}

Partition k_medoids(const FeatureSchema& schema, const std::vector<Pattern>& dataset, std::size_t k,
                    std::span<const double> w, const TsNormalizer& norm, std::uint64_t seed) {
    const ComponentCache cache(schema, dataset, dataset, norm);
    return k_medoids(dataset.size(), k, seed,
                     [&](std::size_t i, std::size_t j) { return cache.weighted(i, j, w); });
}

std::size_t minsod_representative(const FeatureSchema& schema, const std::vector<Pattern>& dataset,
                                  std::span<const std::size_t> members, std::span<const double> w,
                                  const TsNormalizer& norm) {
    return minsod_representative(members, [&](std::size_t i, std::size_t j) {
        return composite_dissimilarity(schema, dataset[i], dataset[j], w, norm);
    });
}

}  // namespace occ
