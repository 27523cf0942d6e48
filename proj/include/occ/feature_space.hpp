#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace occ {

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FeatureKind {
    categorical,
    quantitative,
    circular,
    special_quantitative,
    timeseries,
};

std::string_view to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(std::string_view s);

struct FeatureDescriptor {
    std::string name;
    FeatureKind kind = FeatureKind::quantitative;
    long period = 0;                   ///< circular only; values live in [0, period]
    std::vector<std::string> domain;   ///< categorical only; non-empty label set

    bool operator==(const FeatureDescriptor&) const = default;
};

/// Ordered, validated list of feature descriptors. Immutable after
/// construction; safe for concurrent readers.
class FeatureSchema {
public:
    FeatureSchema() = default;
    explicit FeatureSchema(std::vector<FeatureDescriptor> features);

    std::size_t arity() const { return features_.size(); }
    const FeatureDescriptor& at(std::size_t j) const { return features_.at(j); }
    const std::vector<FeatureDescriptor>& features() const { return features_; }

    std::vector<std::size_t> indices_of(FeatureKind kind) const;

    bool operator==(const FeatureSchema&) const = default;

private:
    std::vector<FeatureDescriptor> features_;
};

/// Value of a special quantitative feature: normalized real or the
/// distinguished "not applicable" symbol.
struct SpecialValue {
    std::optional<double> value;

    static SpecialValue na() { return SpecialValue{std::nullopt}; }
    bool is_na() const { return !value.has_value(); }
    bool operator==(const SpecialValue&) const = default;
};

using EventSequence = std::vector<double>;

/// One feature slot: label, scalar in [0,1], circular integer in [0,a],
/// special value, or event sequence (seconds before the fault).
using FeatureValue = std::variant<std::string, double, long, SpecialValue, EventSequence>;

struct Pattern {
    std::vector<FeatureValue> values;

    bool operator==(const Pattern&) const = default;
};

/// Throws SchemaError / DomainError if the pattern does not conform.
void validate_pattern(const FeatureSchema& schema, const Pattern& x);

// ---------------------------------------------------------------------------
// Per-kind dissimilarity kernels. All are symmetric, non-negative and zero on
// identical arguments.
// ---------------------------------------------------------------------------

/// Fraction of mismatching positions between two categorical projections.
double simple_matching(std::span<const std::string> x, std::span<const std::string> y);

/// Wrap-around distance on the ordered set {0,...,period}.
double circular_diff(long x, long y, long period);

/// |x-y| on normalized values; 1 if exactly one side is "not applicable",
/// 0 if both are.
double special_diff(const SpecialValue& x, const SpecialValue& y);

/// Dynamic time warping with |x_i - y_j| local cost and match/insert/delete
/// steps, no window. Empty vs empty is 0; empty vs non-empty has no
/// alignment and yields +infinity (clamped to the fitted maximum once
/// normalized).
double dtw(const EventSequence& x, const EventSequence& y);

/// Per-timeseries-feature maximum raw DTW value observed on the fitting
/// dataset. Raw values are divided by the maximum and clamped to 1.
struct TsNormalizer {
    std::map<std::size_t, double> max_raw;   ///< keyed by feature index in the schema

    double normalized(std::size_t feature_index, double raw) const;
    bool operator==(const TsNormalizer&) const = default;
};

TsNormalizer fit_ts_normalizer(const FeatureSchema& schema, const std::vector<Pattern>& dataset);

/// Squared single-feature dissimilarity (x_j - y_j)^2 under the kind-specific
/// kernel, with timeseries values normalized through `norm`.
double component_squared(const FeatureSchema& schema, std::size_t j,
                         const FeatureValue& xj, const FeatureValue& yj,
                         const TsNormalizer& norm);

/// Weighted l2 aggregation sqrt(sum_j w_j (x_j - y_j)^2) over the kind
/// dispatched kernels. Symmetric and non-negative but not a metric.
double composite_dissimilarity(const FeatureSchema& schema, const Pattern& x, const Pattern& y,
                               std::span<const double> w, const TsNormalizer& norm);

/// Full symmetric matrix D_ij = d(x_i, x_j). Independent cells are evaluated
/// in parallel; output is deterministic.
std::vector<std::vector<double>> dissimilarity_matrix(const FeatureSchema& schema,
                                                      const std::vector<Pattern>& dataset,
                                                      std::span<const double> w,
                                                      const TsNormalizer& norm);

/// Precomputed per-feature squared components for a rows x cols pattern set,
/// so that reweighting costs one dot product per pair instead of a kernel
/// evaluation. Used heavily by the trainer, which probes thousands of weight
/// vectors against fixed data.
class ComponentCache {
public:
    ComponentCache(const FeatureSchema& schema, const std::vector<Pattern>& rows,
                   const std::vector<Pattern>& cols, const TsNormalizer& norm);

    std::size_t rows() const { return n_rows_; }
    std::size_t cols() const { return n_cols_; }
    std::size_t arity() const { return arity_; }

    /// sqrt(sum_j w_j c_j(i,l))
    double weighted(std::size_t i, std::size_t l, std::span<const double> w) const {
        const double* c = &components_[(i * n_cols_ + l) * arity_];
        double acc = 0.0;
        for (std::size_t j = 0; j < arity_; ++j) acc += w[j] * c[j];
        return std::sqrt(acc);
    }

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::size_t arity_ = 0;
    std::vector<double> components_;
};

}  // namespace occ
