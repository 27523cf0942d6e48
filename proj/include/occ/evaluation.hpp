#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace occ {

class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts count_confusion(const std::vector<bool>& predicted_target,
                                const std::vector<bool>& is_target);

struct ConfusionMetrics {
    double fpr = 0.0;
    double recall = 0.0;
    double precision = 0.0;
    double accuracy = 0.0;
    bool degenerate = false;   ///< some 0/0 ratio was pinned to 0
};

/// Target class counts as positive. Any 0/0 ratio is defined as 0 and
/// flagged; all-zero counts are an error.
ConfusionMetrics confusion_metrics(const ConfusionCounts& counts);

struct RocCurve {
    std::vector<std::array<double, 2>> points;   ///< (FPR, TPR), (0,0) .. (1,1)
    double auc = 0.0;
};

/// ROC curve and AUC from scores where higher means more target-like. AUC is
/// computed via the rank statistic with midrank tie handling (equivalent to
/// trapezoidal integration), so ties contribute half.
RocCurve roc_auc(std::span<const double> scores, const std::vector<bool>& is_positive);

/// Shannon entropy (natural log) of the histogram of weight components over
/// 10 equal-width bins on [0,1].
double weight_entropy(std::span<const double> w);

/// Gaussian kernel density of the weight components sampled on a uniform
/// grid over [0,1], for reporting.
std::vector<std::array<double, 2>> weight_density_curve(std::span<const double> w,
                                                        std::size_t grid = 101);

/// Histogram plug-in mutual information over 10x10 equal-width bins,
/// normalized by min(H(X), H(Y)) so the value lands in [0,1]. Returns 0 when
/// either marginal entropy is 0.
double mutual_information(std::span<const double> xs, std::span<const double> ys);

double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// First two principal components of the column-centered dissimilarity
/// matrix, rows treated as feature vectors. Sign convention: the loading of
/// largest magnitude is positive.
std::vector<std::array<double, 2>> embed_dissimilarity(const std::vector<std::vector<double>>& d);

}  // namespace occ
