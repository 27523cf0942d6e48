#include "occ/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "occ/rand.hpp"

namespace occ {

using nlohmann::json;

double affine_normalize(double c, double m, double M) {
    if (M < m) throw StatsError("affine_normalize: max < min");
    if (M == m) return 0.0;
    return std::clamp((c - m) / (M - m), 0.0, 1.0);
}

std::vector<double> standardize(std::span<const double> column) {
    if (column.empty()) throw StatsError("standardize: empty column");
    const double n = static_cast<double>(column.size());
    const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
    double var = 0.0;
    for (double x : column) var += (x - mean) * (x - mean);
    const double stddev = std::sqrt(var / n);
    std::vector<double> out(column.size(), 0.0);
    if (stddev > 0.0)
        for (std::size_t i = 0; i < column.size(); ++i) out[i] = (column[i] - mean) / stddev;
    return out;
}

// ---------------------------------------------------------------------------
// Geodesics
// ---------------------------------------------------------------------------

namespace {

constexpr double kWgs84A = 6378137.0;
constexpr double kWgs84F = 1.0 / 298.257223563;
constexpr double kWgs84B = kWgs84A * (1.0 - kWgs84F);
constexpr double kPi = 3.14159265358979323846;

double haversine_m(const GeoPoint& p, const GeoPoint& q) {
    const double r = (2.0 * kWgs84A + kWgs84B) / 3.0;   // mean earth radius
    const double phi1 = p.lat_deg * kPi / 180.0, phi2 = q.lat_deg * kPi / 180.0;
    const double dphi = phi2 - phi1;
    const double dlam = (q.lon_deg - p.lon_deg) * kPi / 180.0;
    const double s = std::sin(dphi / 2.0), t = std::sin(dlam / 2.0);
    const double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
    return 2.0 * r * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace

double geodesic_distance(const GeoPoint& p, const GeoPoint& q, bool* used_fallback) {
    if (used_fallback) *used_fallback = false;
    if (p.lat_deg == q.lat_deg && p.lon_deg == q.lon_deg) return 0.0;

    const double phi1 = p.lat_deg * kPi / 180.0, phi2 = q.lat_deg * kPi / 180.0;
    const double u1 = std::atan((1.0 - kWgs84F) * std::tan(phi1));
    const double u2 = std::atan((1.0 - kWgs84F) * std::tan(phi2));
    const double big_l = (q.lon_deg - p.lon_deg) * kPi / 180.0;
    const double sin_u1 = std::sin(u1), cos_u1 = std::cos(u1);
    const double sin_u2 = std::sin(u2), cos_u2 = std::cos(u2);

    double lambda = big_l;
    double sin_sigma = 0.0, cos_sigma = 0.0, sigma = 0.0, cos_sq_alpha = 0.0, cos_2sm = 0.0;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        const double sin_l = std::sin(lambda), cos_l = std::cos(lambda);
        const double t1 = cos_u2 * sin_l;
        const double t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l;
        sin_sigma = std::sqrt(t1 * t1 + t2 * t2);
        if (sin_sigma == 0.0) return 0.0;   // coincident points
        cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_l;
        sigma = std::atan2(sin_sigma, cos_sigma);
        const double sin_alpha = cos_u1 * cos_u2 * sin_l / sin_sigma;
        cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
        cos_2sm = cos_sq_alpha != 0.0 ? cos_sigma - 2.0 * sin_u1 * sin_u2 / cos_sq_alpha
                                      : 0.0;   // equatorial line
        const double c = kWgs84F / 16.0 * cos_sq_alpha * (4.0 + kWgs84F * (4.0 - 3.0 * cos_sq_alpha));
        const double prev = lambda;
        lambda = big_l + (1.0 - c) * kWgs84F * sin_alpha *
                             (sigma + c * sin_sigma *
                                          (cos_2sm + c * cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)));
        if (std::fabs(lambda - prev) < 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        // Near-antipodal pairs; fall back to the spherical approximation.
        if (used_fallback) *used_fallback = true;
        return haversine_m(p, q);
    }

    const double u_sq = cos_sq_alpha * (kWgs84A * kWgs84A - kWgs84B * kWgs84B) / (kWgs84B * kWgs84B);
    const double big_a = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
    const double big_b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
    const double d_sigma =
        big_b * sin_sigma *
        (cos_2sm + big_b / 4.0 *
                       (cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm) -
                        big_b / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) *
                            (-3.0 + 4.0 * cos_2sm * cos_2sm)));
    return kWgs84B * big_a * (sigma - d_sigma);
}

std::vector<std::array<double, 2>> normalize_spatial(const std::vector<GeoPoint>& points,
                                                     BoundingRect* out_rect) {
    if (points.empty()) throw StatsError("normalize_spatial: no points");
    BoundingRect r{points[0].lat_deg, points[0].lat_deg, points[0].lon_deg, points[0].lon_deg};
    for (const auto& p : points) {
        r.min_lat = std::min(r.min_lat, p.lat_deg);
        r.max_lat = std::max(r.max_lat, p.lat_deg);
        r.min_lon = std::min(r.min_lon, p.lon_deg);
        r.max_lon = std::max(r.max_lon, p.lon_deg);
    }
    std::vector<std::array<double, 2>> out;
    out.reserve(points.size());
    for (const auto& p : points)
        out.push_back({affine_normalize(p.lon_deg, r.min_lon, r.max_lon),
                       affine_normalize(p.lat_deg, r.min_lat, r.max_lat)});
    if (out_rect) *out_rect = r;
    return out;
}

std::optional<double> backbone_current_delta(std::span<const double> samples) {
    const std::size_t half = samples.size() / 2;
    if (half == 0 || samples.size() - half == 0) return std::nullopt;
    const double m1 = std::accumulate(samples.begin(), samples.begin() + half, 0.0) / half;
    const double m2 = std::accumulate(samples.begin() + half, samples.end(), 0.0) /
                      static_cast<double>(samples.size() - half);
    return std::fabs(m1 - m2);
}

std::vector<SpecialValue> backbone_current_feature(const std::vector<std::vector<double>>& series,
                                                   AffineStats* out_stats,
                                                   const AffineStats* use_stats) {
    std::vector<std::optional<double>> deltas;
    deltas.reserve(series.size());
    for (const auto& s : series) deltas.push_back(backbone_current_delta(s));

    AffineStats st;
    if (use_stats) {
        st = *use_stats;
    } else {
        bool first = true;
        for (const auto& d : deltas)
            if (d) {
                st.min = first ? *d : std::min(st.min, *d);
                st.max = first ? *d : std::max(st.max, *d);
                first = false;
            }
        if (first) st = AffineStats{0.0, 1.0};
    }
    if (out_stats) *out_stats = st;

    std::vector<SpecialValue> out;
    out.reserve(deltas.size());
    for (const auto& d : deltas)
        out.push_back(d ? SpecialValue{affine_normalize(*d, st.min, st.max)} : SpecialValue::na());
    return out;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kSchemaFormat = "occkit-schema/1";
constexpr const char* kStatsFormat = "occkit-stats/1";

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

json value_to_json(const FeatureDescriptor& f, const FeatureValue& v) {
    switch (f.kind) {
        case FeatureKind::categorical: return std::get<std::string>(v);
        case FeatureKind::quantitative: return std::get<double>(v);
        case FeatureKind::circular: return std::get<long>(v);
        case FeatureKind::special_quantitative: {
            const auto& s = std::get<SpecialValue>(v);
            if (s.is_na()) return "NA";
            return *s.value;
        }
        case FeatureKind::timeseries: return std::get<EventSequence>(v);
    }
    throw SchemaError("unknown feature kind");
}

FeatureValue value_from_json(const FeatureDescriptor& f, const json& j) {
    switch (f.kind) {
        case FeatureKind::categorical:
            if (!j.is_string()) throw SchemaError(f.name + ": expected label");
            return j.get<std::string>();
        case FeatureKind::quantitative:
            if (!j.is_number()) throw SchemaError(f.name + ": expected number");
            return j.get<double>();
        case FeatureKind::circular:
            if (!j.is_number_integer()) throw SchemaError(f.name + ": expected integer");
            return j.get<long>();
        case FeatureKind::special_quantitative:
            if (j.is_string()) {
                if (j.get<std::string>() != "NA")
                    throw SchemaError(f.name + ": unexpected token '" + j.get<std::string>() + "'");
                return SpecialValue::na();
            }
            if (!j.is_number()) throw SchemaError(f.name + ": expected number or \"NA\"");
            return SpecialValue{j.get<double>()};
        case FeatureKind::timeseries: {
            if (!j.is_array()) throw SchemaError(f.name + ": expected array of event times");
            EventSequence seq;
            for (const auto& e : j) {
                if (!e.is_number()) throw SchemaError(f.name + ": non-numeric event time");
                seq.push_back(e.get<double>());
            }
            return seq;
        }
    }
    throw SchemaError("unknown feature kind");
}

}  // namespace

FeatureSchema load_schema(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.is_object() || j.value("format", "") != kSchemaFormat)
        throw IoError(path.string() + ": not a schema file");
    std::vector<FeatureDescriptor> features;
    for (const auto& fj : j.at("features")) {
        FeatureDescriptor f;
        f.name = fj.at("name").get<std::string>();
        f.kind = feature_kind_from_string(fj.at("kind").get<std::string>());
        if (f.kind == FeatureKind::circular) f.period = fj.at("period").get<long>();
        if (f.kind == FeatureKind::categorical)
            f.domain = fj.at("domain").get<std::vector<std::string>>();
        features.push_back(std::move(f));
    }
    return FeatureSchema(std::move(features));
}

void save_schema(const FeatureSchema& schema, const std::filesystem::path& path,
                 const ReproHeader* header) {
    json features = json::array();
    for (const auto& f : schema.features()) {
        json fj{{"name", f.name}, {"kind", std::string(to_string(f.kind))}};
        if (f.kind == FeatureKind::circular) fj["period"] = f.period;
        if (f.kind == FeatureKind::categorical) fj["domain"] = f.domain;
        features.push_back(std::move(fj));
    }
    json j{{"format", kSchemaFormat}, {"features", features}};
    if (header) j["header"] = {{"config_hash", header->config_hash}, {"seed", header->seed}};
    write_text_file(path, j.dump(2) + "\n");
}

NormalizationStats load_stats(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.is_object() || j.value("format", "") != kStatsFormat)
        throw IoError(path.string() + ": not a stats file");
    NormalizationStats st;
    const json affine = j.value("affine", json::object());
    for (const auto& [name, v] : affine.items())
        st.affine[name] = AffineStats{v.at("min").get<double>(), v.at("max").get<double>()};
    const json standardized = j.value("standardized", json::object());
    for (const auto& [name, v] : standardized.items())
        st.standardized[name] = {v.at("mean").get<double>(), v.at("stddev").get<double>()};
    if (j.contains("rect")) {
        const auto& r = j.at("rect");
        st.rect = BoundingRect{r.at("min_lat").get<double>(), r.at("max_lat").get<double>(),
                               r.at("min_lon").get<double>(), r.at("max_lon").get<double>()};
    }
    return st;
}

void save_stats(const NormalizationStats& stats, const std::filesystem::path& path,
                const ReproHeader* header) {
    json j{{"format", kStatsFormat}};
    if (header) j["header"] = {{"config_hash", header->config_hash}, {"seed", header->seed}};
    json affine = json::object();
    for (const auto& [name, st] : stats.affine) affine[name] = {{"min", st.min}, {"max", st.max}};
    j["affine"] = std::move(affine);
    json standardized = json::object();
    for (const auto& [name, ms] : stats.standardized)
        standardized[name] = {{"mean", ms.first}, {"stddev", ms.second}};
    j["standardized"] = std::move(standardized);
    if (stats.rect)
        j["rect"] = {{"min_lat", stats.rect->min_lat},
                     {"max_lat", stats.rect->max_lat},
                     {"min_lon", stats.rect->min_lon},
                     {"max_lon", stats.rect->max_lon}};
    write_text_file(path, j.dump(2) + "\n");
}

NormalizationStats identity_stats(const FeatureSchema& schema) {
    NormalizationStats st;
    for (const auto& f : schema.features())
        if (f.kind == FeatureKind::quantitative || f.kind == FeatureKind::special_quantitative)
            st.affine[f.name] = AffineStats{0.0, 1.0};
    return st;
}

LoadedDataset load_dataset(const std::filesystem::path& data_path,
                           const std::filesystem::path& schema_path,
                           const NormalizationStats* stats) {
    return load_dataset(data_path, load_schema(schema_path), stats);
}

LoadedDataset load_dataset(const std::filesystem::path& data_path, const FeatureSchema& schema,
                           const NormalizationStats* stats) {
    LoadedDataset ds;
    ds.schema = schema;

    std::ifstream in(data_path);
    if (!in) throw IoError("cannot open " + data_path.string());
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw IoError(data_path.string() + " row " + std::to_string(row) + ": " + e.what());
        }
        bool target = true;
        const json* values = &j;
        if (j.is_object()) {
            if (!j.contains("values"))
                throw IoError(data_path.string() + " row " + std::to_string(row) +
                              ": record object lacks \"values\"");
            values = &j.at("values");
            target = j.value("target", true);
        }
        if (!values->is_array() || values->size() != ds.schema.arity())
            throw IoError(data_path.string() + " row " + std::to_string(row) + ": expected " +
                          std::to_string(ds.schema.arity()) + " values, got " +
                          std::to_string(values->is_array() ? values->size() : 0));
        Pattern p;
        p.values.reserve(ds.schema.arity());
        try {
            for (std::size_t c = 0; c < ds.schema.arity(); ++c)
                p.values.push_back(value_from_json(ds.schema.at(c), (*values)[c]));
        } catch (const std::exception& e) {
            throw IoError(data_path.string() + " row " + std::to_string(row) + ": " + e.what());
        }
        ds.patterns.push_back(std::move(p));
        ds.is_target.push_back(target);
    }

    // Fit affine stats on this load unless supplied (inference mode).
    if (stats) {
        ds.stats = *stats;
    } else {
        for (std::size_t j = 0; j < ds.schema.arity(); ++j) {
            const auto& f = ds.schema.at(j);
            if (f.kind != FeatureKind::quantitative && f.kind != FeatureKind::special_quantitative)
                continue;
            bool first = true;
            AffineStats st;
            for (const auto& p : ds.patterns) {
                double v;
                if (f.kind == FeatureKind::quantitative) {
                    v = std::get<double>(p.values[j]);
                } else {
                    const auto& s = std::get<SpecialValue>(p.values[j]);
                    if (s.is_na()) continue;
                    v = *s.value;
                }
                st.min = first ? v : std::min(st.min, v);
                st.max = first ? v : std::max(st.max, v);
                first = false;
            }
            ds.stats.affine[f.name] = first ? AffineStats{0.0, 1.0} : st;
        }
    }

    for (std::size_t j = 0; j < ds.schema.arity(); ++j) {
        const auto& f = ds.schema.at(j);
        if (f.kind != FeatureKind::quantitative && f.kind != FeatureKind::special_quantitative)
            continue;
        const auto it = ds.stats.affine.find(f.name);
        if (it == ds.stats.affine.end())
            throw StatsError("no normalization stats for feature " + f.name);
        for (auto& p : ds.patterns) {
            if (f.kind == FeatureKind::quantitative) {
                auto& v = std::get<double>(p.values[j]);
                v = affine_normalize(v, it->second.min, it->second.max);
            } else {
                auto& s = std::get<SpecialValue>(p.values[j]);
                if (!s.is_na()) s.value = affine_normalize(*s.value, it->second.min, it->second.max);
            }
        }
    }

    std::size_t idx = 0;
    for (const auto& p : ds.patterns) {
        ++idx;
        try {
            validate_pattern(ds.schema, p);
        } catch (const std::exception& e) {
            throw IoError(data_path.string() + " row " + std::to_string(idx) + ": " + e.what());
        }
    }
    return ds;
}

void save_dataset(const std::filesystem::path& path, const FeatureSchema& schema,
                  const std::vector<Pattern>& patterns, const std::vector<bool>* is_target,
                  const ReproHeader* header) {
    if (is_target && is_target->size() != patterns.size())
        throw IoError("save_dataset: label count does not match pattern count");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    if (header)
        out << "# occkit config=" << header->config_hash << " seed=" << header->seed << "\n";
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        json values = json::array();
        for (std::size_t j = 0; j < schema.arity(); ++j)
            values.push_back(value_to_json(schema.at(j), patterns[i].values[j]));
        if (is_target) {
            out << json{{"values", std::move(values)}, {"target", (*is_target)[i]}}.dump() << "\n";
        } else {
            out << values.dump() << "\n";
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

FeatureSchema planar_schema() {
    return FeatureSchema({{.name = "x", .kind = FeatureKind::quantitative},
                          {.name = "y", .kind = FeatureKind::quantitative}});
}

std::vector<Pattern> sample_gaussian_targets(const SyntheticSpec& spec, std::size_t count,
                                             std::uint64_t stream_seed) {
    Rng rng(stream_seed);
    std::vector<Pattern> out;
    out.reserve(count);
    const std::size_t k = spec.centers.size();
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t c = i % k;
        const double x = std::clamp(rng.normal(spec.centers[c][0], spec.spreads[c]), 0.0, 1.0);
        const double y = std::clamp(rng.normal(spec.centers[c][1], spec.spreads[c]), 0.0, 1.0);
        out.push_back(Pattern{{x, y}});
    }
    return out;
}

std::vector<Pattern> sample_uniform_planar(std::size_t count, std::uint64_t stream_seed) {
    Rng rng(stream_seed);
    std::vector<Pattern> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(Pattern{{rng.uniform(), rng.uniform()}});
    return out;
}

}  // namespace

SyntheticProblem generate_gaussian_clusters(const SyntheticSpec& spec) {
    if (spec.centers.empty() || spec.centers.size() != spec.spreads.size())
        throw StatsError("generate_gaussian_clusters: centers/spreads mismatch");
    for (double s : spec.spreads)
        if (!(s >= 0.0)) throw StatsError("generate_gaussian_clusters: negative spread");

    SyntheticProblem p;
    p.schema = planar_schema();
    p.train = sample_gaussian_targets(spec, spec.train_targets, derive_seed(spec.seed, {1}));
    p.validation = sample_gaussian_targets(spec, spec.validation_targets, derive_seed(spec.seed, {2}));
    p.test = sample_gaussian_targets(spec, spec.test_targets, derive_seed(spec.seed, {3}));
    p.validation_is_target.assign(p.validation.size(), true);
    p.test_is_target.assign(p.test.size(), true);

    for (const auto& nt : sample_uniform_planar(spec.nontargets, derive_seed(spec.seed, {4}))) {
        p.validation.push_back(nt);
        p.validation_is_target.push_back(false);
    }
    for (const auto& nt : sample_uniform_planar(spec.nontargets, derive_seed(spec.seed, {5}))) {
        p.test.push_back(nt);
        p.test_is_target.push_back(false);
    }
    return p;
}

UniformProfile UniformProfile::fit(const FeatureSchema& schema, const std::vector<Pattern>& targets) {
    UniformProfile prof;
    for (std::size_t j : schema.indices_of(FeatureKind::special_quantitative)) {
        std::size_t na = 0;
        for (const auto& p : targets)
            if (std::get<SpecialValue>(p.values[j]).is_na()) ++na;
        prof.epsilon_freq[j] = targets.empty() ? 0.0 : static_cast<double>(na) / targets.size();
    }
    for (std::size_t j : schema.indices_of(FeatureKind::timeseries)) {
        std::size_t min_len = 0, max_len = 0;
        double min_v = 0.0, max_v = 1.0;
        bool first_len = true, first_v = true;
        for (const auto& p : targets) {
            const auto& seq = std::get<EventSequence>(p.values[j]);
            min_len = first_len ? seq.size() : std::min(min_len, seq.size());
            max_len = first_len ? seq.size() : std::max(max_len, seq.size());
            first_len = false;
            for (double t : seq) {
                min_v = first_v ? t : std::min(min_v, t);
                max_v = first_v ? t : std::max(max_v, t);
                first_v = false;
            }
        }
        prof.ts_length[j] = {min_len, max_len};
        prof.ts_value[j] = {min_v, max_v};
    }
    return prof;
}

std::vector<Pattern> generate_uniform_nontargets(const FeatureSchema& schema,
                                                 const UniformProfile& profile, std::size_t n,
                                                 std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Pattern> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Pattern p;
        p.values.reserve(schema.arity());
        for (std::size_t j = 0; j < schema.arity(); ++j) {
            const auto& f = schema.at(j);
            switch (f.kind) {
                case FeatureKind::categorical:
                    p.values.emplace_back(f.domain[rng.uniform_index(f.domain.size())]);
                    break;
                case FeatureKind::quantitative:
                    p.values.emplace_back(rng.uniform());
                    break;
                case FeatureKind::circular:
                    p.values.emplace_back(rng.uniform_int(0, f.period));
                    break;
                case FeatureKind::special_quantitative: {
                    const double eps = profile.epsilon_freq.count(j) ? profile.epsilon_freq.at(j) : 0.0;
                    if (rng.uniform() < eps)
                        p.values.emplace_back(SpecialValue::na());
                    else
                        p.values.emplace_back(SpecialValue{rng.uniform()});
                    break;
                }
                case FeatureKind::timeseries: {
                    const auto [lo, hi] = profile.ts_length.count(j)
                                              ? profile.ts_length.at(j)
                                              : std::pair<std::size_t, std::size_t>{0, 0};
                    const auto [vlo, vhi] = profile.ts_value.count(j)
                                                ? profile.ts_value.at(j)
                                                : std::pair<double, double>{0.0, 1.0};
                    const std::size_t len =
                        lo + rng.uniform_index(hi - lo + 1);
                    EventSequence seq(len);
                    for (auto& t : seq) t = rng.uniform(vlo, vhi);
                    std::sort(seq.begin(), seq.end());
                    p.values.emplace_back(std::move(seq));
                    break;
                }
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Heterogeneous surrogate problem
// ---------------------------------------------------------------------------

namespace {

struct ClusterPrototype {
    long day_center = 0;
    long minute_center = 0;
    std::string placement;
    std::string material;
    std::vector<double> quant_centers;
    double section_center = 0.5;
    double section_na_prob = 0.0;
    double ts_start[3] = {0, 0, 0};
    double ts_gap[3] = {0, 0, 0};
    std::size_t ts_len[3] = {0, 0, 0};
    double empty_seq_prob = 0.0;
};

FeatureSchema heterogeneous_schema() {
    return FeatureSchema({
        {.name = "day", .kind = FeatureKind::circular, .period = 364},
        {.name = "minute", .kind = FeatureKind::circular, .period = 1439},
        {.name = "placement", .kind = FeatureKind::categorical, .domain = {"aerial", "underground"}},
        {.name = "material", .kind = FeatureKind::categorical, .domain = {"CU", "AL"}},
        {.name = "dist_primary", .kind = FeatureKind::quantitative},
        {.name = "dist_median", .kind = FeatureKind::quantitative},
        {.name = "stations_out", .kind = FeatureKind::quantitative},
        {.name = "overload", .kind = FeatureKind::quantitative},
        {.name = "temp_max", .kind = FeatureKind::quantitative},
        {.name = "rain", .kind = FeatureKind::quantitative},
        {.name = "section", .kind = FeatureKind::special_quantitative},
        {.name = "current_delta", .kind = FeatureKind::quantitative},
        {.name = "events_break", .kind = FeatureKind::timeseries},
        {.name = "events_alarm", .kind = FeatureKind::timeseries},
        {.name = "events_save", .kind = FeatureKind::timeseries},
    });
}

long wrap_mod(double v, long modulus) {
    long r = static_cast<long>(std::llround(v)) % modulus;
    if (r < 0) r += modulus;
    return r;
}

std::vector<ClusterPrototype> make_prototypes(std::size_t k, std::uint64_t seed) {
    std::vector<ClusterPrototype> protos(k);
    for (std::size_t c = 0; c < k; ++c) {
        Rng rng(derive_seed(seed, {90, c}));
        auto& pr = protos[c];
        // Spread the day/minute centers around the circle so clusters do not
        // collide in the temporal features.
        pr.day_center = static_cast<long>((c * 365) / k + rng.uniform_index(365 / (2 * k))) % 365;
        pr.minute_center = static_cast<long>((c * 1440) / k + rng.uniform_index(1440 / (2 * k))) % 1440;
        pr.placement = c % 2 == 0 ? "aerial" : "underground";
        pr.material = (c / 2) % 2 == 0 ? "CU" : "AL";
        pr.quant_centers.resize(6);
        for (auto& q : pr.quant_centers) q = rng.uniform(0.15, 0.85);
        pr.section_center = rng.uniform(0.15, 0.85);
        pr.section_na_prob = 0.3 * static_cast<double>(c % 3);
        for (int t = 0; t < 3; ++t) {
            pr.ts_start[t] = rng.uniform(0.0, 5e5);
            pr.ts_gap[t] = rng.uniform(1e4, 5e4);
            pr.ts_len[t] = 3 + rng.uniform_index(5);
        }
        pr.empty_seq_prob = c == 0 ? 0.15 : 0.0;
    }
    return protos;
}

std::vector<Pattern> sample_heterogeneous_targets(const FeatureSchema& schema,
                                                  const std::vector<ClusterPrototype>& protos,
                                                  std::size_t count, std::uint64_t stream_seed) {
    Rng rng(stream_seed);
    std::vector<Pattern> out;
    out.reserve(count);
    const std::size_t k = protos.size();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& pr = protos[i % k];
        Pattern p;
        p.values.reserve(schema.arity());
        p.values.emplace_back(wrap_mod(rng.normal(static_cast<double>(pr.day_center), 10.0), 365));
        p.values.emplace_back(wrap_mod(rng.normal(static_cast<double>(pr.minute_center), 40.0), 1440));
        p.values.emplace_back(rng.uniform() < 0.85 ? pr.placement
                                                   : schema.at(2).domain[rng.uniform_index(2)]);
        p.values.emplace_back(rng.uniform() < 0.85 ? pr.material
                                                   : schema.at(3).domain[rng.uniform_index(2)]);
        for (double q : pr.quant_centers)
            p.values.emplace_back(std::clamp(rng.normal(q, 0.04), 0.0, 1.0));
        if (rng.uniform() < pr.section_na_prob)
            p.values.emplace_back(SpecialValue::na());
        else
            p.values.emplace_back(SpecialValue{std::clamp(rng.normal(pr.section_center, 0.04), 0.0, 1.0)});
        // current_delta sits right after the 7 quantitative centers; reuse the
        // last center shifted so it stays cluster-specific but distinct.
        p.values.emplace_back(std::clamp(rng.normal(1.0 - pr.quant_centers[0], 0.04), 0.0, 1.0));
        for (int t = 0; t < 3; ++t) {
            if (rng.uniform() < pr.empty_seq_prob) {
                p.values.emplace_back(EventSequence{});
                continue;
            }
            const std::size_t len = pr.ts_len[t] == 0
                                        ? 0
                                        : pr.ts_len[t] - 1 + rng.uniform_index(3);
            EventSequence seq(len);
            for (std::size_t e = 0; e < len; ++e)
                seq[e] = std::max(0.0, pr.ts_start[t] + static_cast<double>(e) * pr.ts_gap[t] +
                                           rng.normal(0.0, 2e3));
            std::sort(seq.begin(), seq.end());
            p.values.emplace_back(std::move(seq));
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

SyntheticProblem generate_heterogeneous_clusters(const HeterogeneousSpec& spec) {
    if (spec.clusters == 0) throw StatsError("generate_heterogeneous_clusters: need >= 1 cluster");
    SyntheticProblem p;
    p.schema = heterogeneous_schema();
    const auto protos = make_prototypes(spec.clusters, spec.seed);

    p.train = sample_heterogeneous_targets(p.schema, protos, spec.train_targets,
                                           derive_seed(spec.seed, {11}));
    p.validation = sample_heterogeneous_targets(p.schema, protos, spec.validation_targets,
                                                derive_seed(spec.seed, {12}));
    p.test = sample_heterogeneous_targets(p.schema, protos, spec.test_targets,
                                          derive_seed(spec.seed, {13}));
    p.validation_is_target.assign(p.validation.size(), true);
    p.test_is_target.assign(p.test.size(), true);

    const auto profile = UniformProfile::fit(p.schema, p.train);
    for (auto& nt : generate_uniform_nontargets(p.schema, profile, spec.nontargets,
                                                derive_seed(spec.seed, {14}))) {
        p.validation.push_back(std::move(nt));
        p.validation_is_target.push_back(false);
    }
    for (auto& nt : generate_uniform_nontargets(p.schema, profile, spec.nontargets,
                                                derive_seed(spec.seed, {15}))) {
        p.test.push_back(std::move(nt));
        p.test_is_target.push_back(false);
    }
    return p;
}

}  // namespace occ
