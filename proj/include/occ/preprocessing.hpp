#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occ/feature_space.hpp"

namespace occ {

class StatsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (c - m) / (M - m), clamped to [0,1]. A constant feature (M == m) maps to 0.
double affine_normalize(double c, double m, double M);

/// Zero mean, unit variance; an all-equal column maps to all zeros.
std::vector<double> standardize(std::span<const double> column);

// ---------------------------------------------------------------------------
// Spatial preprocessing
// ---------------------------------------------------------------------------

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

/// Inverse geodesic on the WGS84 ellipsoid (Vincenty), in meters.
/// Near-antipodal pairs where the iteration fails fall back to a spherical
/// great-circle value and set *used_fallback.
double geodesic_distance(const GeoPoint& p, const GeoPoint& q, bool* used_fallback = nullptr);

struct BoundingRect {
    double min_lat = 0.0, max_lat = 0.0, min_lon = 0.0, max_lon = 0.0;

    bool operator==(const BoundingRect&) const = default;
};

/// Per-axis affine normalization against the bounding rectangle of the
/// points. A degenerate axis maps to 0.
std::vector<std::array<double, 2>> normalize_spatial(const std::vector<GeoPoint>& points,
                                                     BoundingRect* out_rect = nullptr);

/// |mean(first half) - mean(second half)| of a day of current samples split
/// at the 12h boundary; nullopt when a sub-window is empty.
std::optional<double> backbone_current_delta(std::span<const double> samples);

/// Applies backbone_current_delta to every series and affine-normalizes the
/// deltas against the dataset min/max of the statistic (or `use_stats` when
/// given). Missing deltas become the "not applicable" value.
struct AffineStats {
    double min = 0.0;
    double max = 1.0;

    bool operator==(const AffineStats&) const = default;
};

std::vector<SpecialValue> backbone_current_feature(const std::vector<std::vector<double>>& series,
                                                   AffineStats* out_stats = nullptr,
                                                   const AffineStats* use_stats = nullptr);

// ---------------------------------------------------------------------------
// Dataset persistence
// ---------------------------------------------------------------------------

/// Reproducibility stamp written into every artifact a run produces.
struct ReproHeader {
    std::string config_hash;
    std::uint64_t seed = 0;
};

/// Normalization parameters persisted with a model and applied identically at
/// train and inference time.
struct NormalizationStats {
    std::map<std::string, AffineStats> affine;                       ///< by feature name
    std::map<std::string, std::pair<double, double>> standardized;   ///< (mean, stddev)
    std::optional<BoundingRect> rect;

    bool operator==(const NormalizationStats&) const = default;
};

/// Identity mapping for data already in the model domain.
NormalizationStats identity_stats(const FeatureSchema& schema);

struct LoadedDataset {
    FeatureSchema schema;
    std::vector<Pattern> patterns;
    std::vector<bool> is_target;   ///< all true when the file carries no labels
    NormalizationStats stats;
};

FeatureSchema load_schema(const std::filesystem::path& path);
void save_schema(const FeatureSchema& schema, const std::filesystem::path& path,
                 const ReproHeader* header = nullptr);

NormalizationStats load_stats(const std::filesystem::path& path);
void save_stats(const NormalizationStats& stats, const std::filesystem::path& path,
                const ReproHeader* header = nullptr);

/// Loads a dataset file (one record per line, '#' lines skipped), validates
/// each row against the schema and affine-normalizes quantitative/special
/// features. Stats are fitted on this load unless `stats` is supplied
/// (inference mode).
LoadedDataset load_dataset(const std::filesystem::path& data_path,
                           const std::filesystem::path& schema_path,
                           const NormalizationStats* stats = nullptr);
LoadedDataset load_dataset(const std::filesystem::path& data_path, const FeatureSchema& schema,
                           const NormalizationStats* stats = nullptr);

void save_dataset(const std::filesystem::path& path, const FeatureSchema& schema,
                  const std::vector<Pattern>& patterns,
                  const std::vector<bool>* is_target = nullptr,
                  const ReproHeader* header = nullptr);

// ---------------------------------------------------------------------------
// Synthetic generators
// ---------------------------------------------------------------------------

struct SyntheticSpec {
    std::vector<std::array<double, 2>> centers;
    std::vector<double> spreads;          ///< isotropic, one per cluster
    std::size_t train_targets = 0;        ///< split evenly across clusters
    std::size_t validation_targets = 0;
    std::size_t test_targets = 0;
    std::size_t nontargets = 0;           ///< uniform on [0,1]^2, added to validation and test
    std::uint64_t seed = 0;
};

struct SyntheticProblem {
    FeatureSchema schema;
    std::vector<Pattern> train;
    std::vector<Pattern> validation;
    std::vector<bool> validation_is_target;
    std::vector<Pattern> test;
    std::vector<bool> test_is_target;
};

/// 2-D quantitative patterns from isotropic Gaussians clipped to [0,1]^2,
/// plus uniform non-targets in the validation/test splits.
SyntheticProblem generate_gaussian_clusters(const SyntheticSpec& spec);

/// Empirical ranges of the target set needed to generate uniform non-targets
/// over a heterogeneous schema.
struct UniformProfile {
    std::map<std::size_t, double> epsilon_freq;                            ///< special features
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> ts_length;  ///< min/max length
    std::map<std::size_t, std::pair<double, double>> ts_value;             ///< min/max event time

    static UniformProfile fit(const FeatureSchema& schema, const std::vector<Pattern>& targets);
};

/// Uniformly distributed non-target patterns: quantitative/special uniform on
/// [0,1] (with the target set's epsilon frequency), categorical uniform over
/// the domain, circular uniform over {0..a}, event sequences with uniform
/// length and values within the observed ranges.
std::vector<Pattern> generate_uniform_nontargets(const FeatureSchema& schema,
                                                 const UniformProfile& profile, std::size_t n,
                                                 std::uint64_t seed);

/// Cluster-structured synthetic problem exercising all five feature kinds
/// (including "not applicable" values and variable-length event sequences).
struct HeterogeneousSpec {
    std::size_t clusters = 3;
    std::size_t train_targets = 90;
    std::size_t validation_targets = 90;
    std::size_t test_targets = 90;
    std::size_t nontargets = 600;   ///< added to validation and test
    std::uint64_t seed = 0;
};

SyntheticProblem generate_heterogeneous_clusters(const HeterogeneousSpec& spec);

}  // namespace occ
