#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "occ/clustering.hpp"
#include "occ/feature_space.hpp"
#include "occ/preprocessing.hpp"

namespace occ {

/// One cluster of the decision model: its representative pattern, extent
/// delta and learned tolerance sigma. The decision region is the
/// dissimilarity ball of radius B = delta + sigma around the representative;
/// the soft score is a sigmoid with steepness a = delta centred at
/// b = delta + sigma/2.
struct ClusterRegion {
    Pattern representative;
    double extent = 0.0;      ///< delta
    double tolerance = 0.0;   ///< sigma

    double sigmoid_a() const { return extent; }
    double sigmoid_b() const { return extent + tolerance / 2.0; }
    double boundary() const { return extent + tolerance; }
};

struct OccModel {
    FeatureSchema schema;
    std::vector<double> weights;
    std::vector<ClusterRegion> clusters;
    TsNormalizer ts_norm;
    NormalizationStats stats;
    ExtentStrategy extent_strategy = ExtentStrategy::mean;
};

struct Decision {
    bool target = false;
    double membership = 0.0;
    std::size_t cluster = 0;
    double dissimilarity = 0.0;
};

/// Index and dissimilarity of the nearest cluster representative; ties break
/// to the lowest cluster index.
std::pair<std::size_t, double> nearest_representative(const Pattern& x, const OccModel& model);

/// Hard rule: accepted iff d(x, c*) <= B(C*), boundary inclusive.
bool hard_classify(const Pattern& x, const OccModel& model);

/// 1/(1+exp((d-b)/a)). A zero-extent cluster degenerates to the a->0+ limit:
/// 1 if d <= b else 0.
double sigmoid_membership(double d, double a, double b);

/// Soft score of x under its nearest cluster's membership function.
double membership(const Pattern& x, const OccModel& model);

Decision classify(const Pattern& x, const OccModel& model);

/// card(M and M^c) / card(M or M^c) with min/max connectives and sigma-count
/// cardinality. 0 iff every membership is crisp, 1 iff all equal 0.5.
double fuzzy_entropy(std::span<const double> memberships);

/// Three replicates trained from the same genome with different clustering
/// initializations. Hard decisions are taken by majority vote; the soft score
/// comes from the replicate whose validation memberships had the lowest
/// fuzzy entropy.
struct Ensemble {
    std::vector<OccModel> replicates;
    std::size_t selected = 0;
};

/// Index of the replicate with minimal fuzzy entropy; ties break low.
std::size_t select_replicate(std::span<const std::vector<double>> validation_memberships);

Decision ensemble_classify(const Pattern& x, const Ensemble& e);

// Model persistence (versioned structured text).
void save_model(const OccModel& model, const std::filesystem::path& path);
OccModel load_model(const std::filesystem::path& path);

void save_ensemble(const Ensemble& e, const std::filesystem::path& path, const ReproHeader& header);
Ensemble load_ensemble(const std::filesystem::path& path, ReproHeader* header = nullptr);

}  // namespace occ
