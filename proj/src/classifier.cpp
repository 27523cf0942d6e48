#include "occ/classifier.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace occ {

using nlohmann::json;

std::pair<std::size_t, double> nearest_representative(const Pattern& x, const OccModel& model) {
    if (model.clusters.empty()) throw ClusteringError("model has no clusters");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.clusters.size(); ++c) {
        const double d = composite_dissimilarity(model.schema, x, model.clusters[c].representative,
                                                 model.weights, model.ts_norm);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return {best, best_d};
}

bool hard_classify(const Pattern& x, const OccModel& model) {
    const auto [c, d] = nearest_representative(x, model);
    return d <= model.clusters[c].boundary();
}

double sigmoid_membership(double d, double a, double b) {
    if (a <= 0.0) return d <= b ? 1.0 : 0.0;
    // Large exponents would overflow exp(); the sigmoid saturates anyway.
    const double z = (d - b) / a;
    if (z > 700.0) return 0.0;
    if (z < -700.0) return 1.0;
    return 1.0 / (1.0 + std::exp(z));
}

double membership(const Pattern& x, const OccModel& model) {
    const auto [c, d] = nearest_representative(x, model);
    return sigmoid_membership(d, model.clusters[c].sigmoid_a(), model.clusters[c].sigmoid_b());
}

Decision classify(const Pattern& x, const OccModel& model) {
    const auto [c, d] = nearest_representative(x, model);
    Decision out;
    out.cluster = c;
    out.dissimilarity = d;
    out.target = d <= model.clusters[c].boundary();
    out.membership = sigmoid_membership(d, model.clusters[c].sigmoid_a(), model.clusters[c].sigmoid_b());
    return out;
}

double fuzzy_entropy(std::span<const double> memberships) {
    if (memberships.empty()) throw std::invalid_argument("fuzzy_entropy: empty membership set");
    double num = 0.0, den = 0.0;
    for (double mu : memberships) {
        num += std::min(mu, 1.0 - mu);
        den += std::max(mu, 1.0 - mu);
    }
    return num / den;   // den >= n/2 > 0
}

std::size_t select_replicate(std::span<const std::vector<double>> validation_memberships) {
    if (validation_memberships.empty()) throw std::invalid_argument("select_replicate: no replicates");
    std::size_t best = 0;
    double best_fe = fuzzy_entropy(validation_memberships[0]);
    for (std::size_t r = 1; r < validation_memberships.size(); ++r) {
        const double fe = fuzzy_entropy(validation_memberships[r]);
        if (fe < best_fe) {
            best_fe = fe;
            best = r;
        }
    }
    return best;
}

Decision ensemble_classify(const Pattern& x, const Ensemble& e) {
    if (e.replicates.empty()) throw std::invalid_argument("ensemble_classify: no replicates");
    std::size_t votes = 0;
    for (const auto& m : e.replicates)
        if (hard_classify(x, m)) ++votes;
    Decision out = classify(x, e.replicates.at(e.selected));
    out.target = 2 * votes > e.replicates.size();
    return out;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kModelFormat = "occkit-model/1";
constexpr const char* kEnsembleFormat = "occkit-ensemble/1";

json pattern_to_json(const FeatureSchema& schema, const Pattern& p) {
    json values = json::array();
    for (std::size_t j = 0; j < schema.arity(); ++j) {
        const auto& f = schema.at(j);
        switch (f.kind) {
            case FeatureKind::categorical: values.push_back(std::get<std::string>(p.values[j])); break;
            case FeatureKind::quantitative: values.push_back(std::get<double>(p.values[j])); break;
            case FeatureKind::circular: values.push_back(std::get<long>(p.values[j])); break;
            case FeatureKind::special_quantitative: {
                const auto& s = std::get<SpecialValue>(p.values[j]);
                if (s.is_na())
                    values.push_back("NA");
                else
                    values.push_back(*s.value);
                break;
            }
            case FeatureKind::timeseries: values.push_back(std::get<EventSequence>(p.values[j])); break;
        }
    }
    return values;
}

Pattern pattern_from_json(const FeatureSchema& schema, const json& values) {
    Pattern p;
    p.values.reserve(schema.arity());
    for (std::size_t j = 0; j < schema.arity(); ++j) {
        const auto& f = schema.at(j);
        const auto& v = values.at(j);
        switch (f.kind) {
            case FeatureKind::categorical: p.values.emplace_back(v.get<std::string>()); break;
            case FeatureKind::quantitative: p.values.emplace_back(v.get<double>()); break;
            case FeatureKind::circular: p.values.emplace_back(v.get<long>()); break;
            case FeatureKind::special_quantitative:
                if (v.is_string())
                    p.values.emplace_back(SpecialValue::na());
                else
                    p.values.emplace_back(SpecialValue{v.get<double>()});
                break;
            case FeatureKind::timeseries:
                p.values.emplace_back(v.get<EventSequence>());
                break;
        }
    }
    return p;
}

json schema_to_json(const FeatureSchema& schema) {
    json features = json::array();
    for (const auto& f : schema.features()) {
        json fj{{"name", f.name}, {"kind", std::string(to_string(f.kind))}};
        if (f.kind == FeatureKind::circular) fj["period"] = f.period;
        if (f.kind == FeatureKind::categorical) fj["domain"] = f.domain;
        features.push_back(std::move(fj));
    }
    return features;
}

FeatureSchema schema_from_json(const json& features) {
    std::vector<FeatureDescriptor> fs;
    for (const auto& fj : features) {
        FeatureDescriptor f;
        f.name = fj.at("name").get<std::string>();
        f.kind = feature_kind_from_string(fj.at("kind").get<std::string>());
        if (f.kind == FeatureKind::circular) f.period = fj.at("period").get<long>();
        if (f.kind == FeatureKind::categorical)
            f.domain = fj.at("domain").get<std::vector<std::string>>();
        fs.push_back(std::move(f));
    }
    return FeatureSchema(std::move(fs));
}

json stats_to_json(const NormalizationStats& stats) {
    json j = json::object();
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
    return j;
}

NormalizationStats stats_from_json(const json& j) {
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

json model_to_json(const OccModel& model) {
    json clusters = json::array();
    for (const auto& c : model.clusters)
        clusters.push_back({{"representative", pattern_to_json(model.schema, c.representative)},
                            {"extent", c.extent},
                            {"tolerance", c.tolerance}});
    json ts = json::object();
    for (const auto& [idx, mx] : model.ts_norm.max_raw) ts[std::to_string(idx)] = mx;
    return json{{"schema", schema_to_json(model.schema)},
                {"weights", model.weights},
                {"clusters", std::move(clusters)},
                {"ts_max", std::move(ts)},
                {"stats", stats_to_json(model.stats)},
                {"extent_strategy", std::string(to_string(model.extent_strategy))}};
}

OccModel model_from_json(const json& j) {
    OccModel m;
    m.schema = schema_from_json(j.at("schema"));
    m.weights = j.at("weights").get<std::vector<double>>();
    for (const auto& cj : j.at("clusters")) {
        ClusterRegion c;
        c.representative = pattern_from_json(m.schema, cj.at("representative"));
        c.extent = cj.at("extent").get<double>();
        c.tolerance = cj.at("tolerance").get<double>();
        m.clusters.push_back(std::move(c));
    }
    for (const auto& [key, v] : j.at("ts_max").items())
        m.ts_norm.max_raw[std::stoul(key)] = v.get<double>();
    m.stats = stats_from_json(j.at("stats"));
    m.extent_strategy = extent_strategy_from_string(j.at("extent_strategy").get<std::string>());
    return m;
}

json read_json_file_(const std::filesystem::path& path) {
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

void write_json_file_(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void save_model(const OccModel& model, const std::filesystem::path& path) {
    json j = model_to_json(model);
    j["format"] = kModelFormat;
    write_json_file_(path, j);
}

OccModel load_model(const std::filesystem::path& path) {
    const json j = read_json_file_(path);
    if (j.value("format", "") != kModelFormat) throw IoError(path.string() + ": not a model file");
    return model_from_json(j);
}

void save_ensemble(const Ensemble& e, const std::filesystem::path& path, const ReproHeader& header) {
    json replicates = json::array();
    for (const auto& m : e.replicates) replicates.push_back(model_to_json(m));
    write_json_file_(path, json{{"format", kEnsembleFormat},
                                {"header", {{"config_hash", header.config_hash}, {"seed", header.seed}}},
                                {"selected", e.selected},
                                {"replicates", std::move(replicates)}});
}

Ensemble load_ensemble(const std::filesystem::path& path, ReproHeader* header) {
    const json j = read_json_file_(path);
    if (j.value("format", "") != kEnsembleFormat)
        throw IoError(path.string() + ": not an ensemble file");
    Ensemble e;
    e.selected = j.at("selected").get<std::size_t>();
    for (const auto& mj : j.at("replicates")) e.replicates.push_back(model_from_json(mj));
    if (e.replicates.empty() || e.selected >= e.replicates.size())
        throw IoError(path.string() + ": invalid ensemble contents");
    if (header) {
        header->config_hash = j.at("header").at("config_hash").get<std::string>();
        header->seed = j.at("header").at("seed").get<std::uint64_t>();
    }
    return e;
}

}  // namespace occ
