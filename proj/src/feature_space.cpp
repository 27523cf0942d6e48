#include "occ/feature_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

namespace occ {

std::string_view to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::categorical: return "categorical";
        case FeatureKind::quantitative: return "quantitative";
        case FeatureKind::circular: return "circular";
        case FeatureKind::special_quantitative: return "special_quantitative";
        case FeatureKind::timeseries: return "timeseries";
    }
    throw SchemaError("unknown feature kind");
}

FeatureKind feature_kind_from_string(std::string_view s) {
    if (s == "categorical") return FeatureKind::categorical;
    if (s == "quantitative") return FeatureKind::quantitative;
    if (s == "circular") return FeatureKind::circular;
    if (s == "special_quantitative") return FeatureKind::special_quantitative;
    if (s == "timeseries") return FeatureKind::timeseries;
    throw SchemaError("unknown feature kind: " + std::string(s));
}

FeatureSchema::FeatureSchema(std::vector<FeatureDescriptor> features)
    : features_(std::move(features)) {
    if (features_.empty()) throw SchemaError("schema must have at least one feature");
    std::set<std::string> names;
    for (const auto& f : features_) {
        if (f.name.empty()) throw SchemaError("feature with empty name");
        if (!names.insert(f.name).second) throw SchemaError("duplicate feature name: " + f.name);
        if (f.kind == FeatureKind::circular && f.period < 1)
            throw SchemaError("circular feature " + f.name + " needs period >= 1");
        if (f.kind == FeatureKind::categorical && f.domain.empty())
            throw SchemaError("categorical feature " + f.name + " needs a non-empty domain");
    }
}

std::vector<std::size_t> FeatureSchema::indices_of(FeatureKind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < features_.size(); ++j)
        if (features_[j].kind == kind) out.push_back(j);
    return out;
}

void validate_pattern(const FeatureSchema& schema, const Pattern& x) {
    if (x.values.size() != schema.arity())
        throw SchemaError("pattern arity " + std::to_string(x.values.size()) +
                          " does not match schema arity " + std::to_string(schema.arity()));
    for (std::size_t j = 0; j < schema.arity(); ++j) {
        const auto& f = schema.at(j);
        const auto& v = x.values[j];
        switch (f.kind) {
            case FeatureKind::categorical: {
                const auto* s = std::get_if<std::string>(&v);
                if (!s) throw SchemaError("feature " + f.name + ": expected label");
                if (std::find(f.domain.begin(), f.domain.end(), *s) == f.domain.end())
                    throw DomainError("feature " + f.name + ": label '" + *s + "' not in domain");
                break;
            }
            case FeatureKind::quantitative: {
                const auto* d = std::get_if<double>(&v);
                if (!d) throw SchemaError("feature " + f.name + ": expected scalar");
                if (!(*d >= 0.0 && *d <= 1.0))
                    throw DomainError("feature " + f.name + ": value outside [0,1]");
                break;
            }
            case FeatureKind::circular: {
                const auto* i = std::get_if<long>(&v);
                if (!i) throw SchemaError("feature " + f.name + ": expected integer");
                if (*i < 0 || *i > f.period)
                    throw DomainError("feature " + f.name + ": value outside [0," +
                                      std::to_string(f.period) + "]");
                break;
            }
            case FeatureKind::special_quantitative: {
                const auto* s = std::get_if<SpecialValue>(&v);
                if (!s) throw SchemaError("feature " + f.name + ": expected special value");
                if (!s->is_na() && !(*s->value >= 0.0 && *s->value <= 1.0))
                    throw DomainError("feature " + f.name + ": value outside [0,1]");
                break;
            }
            case FeatureKind::timeseries: {
                const auto* e = std::get_if<EventSequence>(&v);
                if (!e) throw SchemaError("feature " + f.name + ": expected event sequence");
                for (double t : *e)
                    if (!(t >= 0.0))
                        throw DomainError("feature " + f.name + ": negative event time");
                break;
            }
        }
    }
}

double simple_matching(std::span<const std::string> x, std::span<const std::string> y) {
    if (x.size() != y.size() || x.empty())
        throw SchemaError("simple_matching: projections must have equal, non-zero arity");
    std::size_t mismatches = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] != y[j]) ++mismatches;
    return static_cast<double>(mismatches) / static_cast<double>(x.size());
}

double circular_diff(long x, long y, long period) {
    if (period < 1) throw DomainError("circular_diff: period must be >= 1");
    if (x < 0 || x > period || y < 0 || y > period)
        throw DomainError("circular_diff: value outside [0," + std::to_string(period) + "]");
    const long diff = std::labs(x - y);
    return static_cast<double>(std::min(diff, period - diff));
}

double special_diff(const SpecialValue& x, const SpecialValue& y) {
    if (x.is_na() && y.is_na()) return 0.0;
    if (x.is_na() || y.is_na()) return 1.0;
    const double a = *x.value, b = *y.value;
    if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0))
        throw DomainError("special_diff: values must be normalized to [0,1]");
    return std::fabs(a - b);
}

double dtw(const EventSequence& x, const EventSequence& y) {
    const std::size_t n = x.size(), m = y.size();
    if (n == 0 && m == 0) return 0.0;
    if (n == 0 || m == 0) return std::numeric_limits<double>::infinity();

    // Rolling two-row table; cell (i,j) = local cost + min(match, insert, delete).
    std::vector<double> prev(m), curr(m);
    for (std::size_t j = 0; j < m; ++j)
        prev[j] = std::fabs(x[0] - y[j]) + (j > 0 ? prev[j - 1] : 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        curr[0] = std::fabs(x[i] - y[0]) + prev[0];
        for (std::size_t j = 1; j < m; ++j)
            curr[j] = std::fabs(x[i] - y[j]) + std::min({prev[j - 1], prev[j], curr[j - 1]});
        std::swap(prev, curr);
    }
    return prev[m - 1];
}

double TsNormalizer::normalized(std::size_t feature_index, double raw) const {
    auto it = max_raw.find(feature_index);
    if (it == max_raw.end())
        throw SchemaError("no fitted DTW maximum for feature index " + std::to_string(feature_index));
    return std::min(raw / it->second, 1.0);
}

TsNormalizer fit_ts_normalizer(const FeatureSchema& schema, const std::vector<Pattern>& dataset) {
    TsNormalizer norm;
    for (std::size_t j : schema.indices_of(FeatureKind::timeseries)) {
        double max_value = 0.0;
        for (std::size_t a = 0; a + 1 < dataset.size(); ++a) {
            const auto& xa = std::get<EventSequence>(dataset[a].values[j]);
            for (std::size_t b = a + 1; b < dataset.size(); ++b) {
                const double raw = dtw(xa, std::get<EventSequence>(dataset[b].values[j]));
                if (std::isfinite(raw)) max_value = std::max(max_value, raw);
            }
        }
        // All sequences identical (or fewer than two comparable ones): keep a
        // sentinel so division stays well-defined and values normalize to 0.
        norm.max_raw[j] = max_value > 0.0 ? max_value : 1.0;
    }
    return norm;
}

double component_squared(const FeatureSchema& schema, std::size_t j,
                         const FeatureValue& xj, const FeatureValue& yj,
                         const TsNormalizer& norm) {
    const auto& f = schema.at(j);
    double c = 0.0;
    switch (f.kind) {
        case FeatureKind::categorical:
            c = std::get<std::string>(xj) == std::get<std::string>(yj) ? 0.0 : 1.0;
            break;
        case FeatureKind::quantitative:
            c = std::fabs(std::get<double>(xj) - std::get<double>(yj));
            break;
        case FeatureKind::circular:
            c = circular_diff(std::get<long>(xj), std::get<long>(yj), f.period);
            break;
        case FeatureKind::special_quantitative:
            c = special_diff(std::get<SpecialValue>(xj), std::get<SpecialValue>(yj));
            break;
        case FeatureKind::timeseries:
            c = norm.normalized(j, dtw(std::get<EventSequence>(xj), std::get<EventSequence>(yj)));
            break;
    }
    return c * c;
}

double composite_dissimilarity(const FeatureSchema& schema, const Pattern& x, const Pattern& y,
                               std::span<const double> w, const TsNormalizer& norm) {
    if (x.values.size() != schema.arity() || y.values.size() != schema.arity())
        throw SchemaError("composite_dissimilarity: pattern arity does not match schema");
    if (w.size() != schema.arity())
        throw SchemaError("composite_dissimilarity: weight arity does not match schema");
    double acc = 0.0;
    for (std::size_t j = 0; j < schema.arity(); ++j)
        acc += w[j] * component_squared(schema, j, x.values[j], y.values[j], norm);
    return std::sqrt(acc);
}

std::vector<std::vector<double>> dissimilarity_matrix(const FeatureSchema& schema,
                                                      const std::vector<Pattern>& dataset,
                                                      std::span<const double> w,
                                                      const TsNormalizer& norm) {
    const std::size_t n = dataset.size();
    if (n == 0) throw SchemaError("dissimilarity_matrix: empty dataset");
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));

    const auto fill_rows = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                d[i][j] = composite_dissimilarity(schema, dataset[i], dataset[j], w, norm);
    };

    const std::size_t workers = std::min<std::size_t>(std::thread::hardware_concurrency(), n);
    if (workers > 1 && n > 64) {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t t = 0; t < workers; ++t) {
            const std::size_t begin = t * chunk, end = std::min(n, begin + chunk);
            if (begin < end) pool.emplace_back(fill_rows, begin, end);
        }
        for (auto& th : pool) th.join();
    } else {
        fill_rows(0, n);
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) d[i][j] = d[j][i];
    return d;
}

ComponentCache::ComponentCache(const FeatureSchema& schema, const std::vector<Pattern>& rows,
                               const std::vector<Pattern>& cols, const TsNormalizer& norm)
    : n_rows_(rows.size()), n_cols_(cols.size()), arity_(schema.arity()),
      components_(n_rows_ * n_cols_ * arity_) {
    const auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t l = 0; l < n_cols_; ++l) {
                double* c = &components_[(i * n_cols_ + l) * arity_];
                for (std::size_t j = 0; j < arity_; ++j)
                    c[j] = component_squared(schema, j, rows[i].values[j], cols[l].values[j], norm);
            }
    };
    const std::size_t workers = std::min<std::size_t>(std::thread::hardware_concurrency(), n_rows_);
    if (workers > 1 && n_rows_ * n_cols_ > 4096) {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_rows_ + workers - 1) / workers;
        for (std::size_t t = 0; t < workers; ++t) {
            const std::size_t begin = t * chunk, end = std::min(n_rows_, begin + chunk);
            if (begin < end) pool.emplace_back(fill, begin, end);
        }
        for (auto& th : pool) th.join();
    } else {
        fill(0, n_rows_);
    }
}

}  // namespace occ
