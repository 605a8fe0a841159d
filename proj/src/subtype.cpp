#include "tpc/subtype.hpp"

#include "tpc/errors.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tpc {

using ordered_json = nlohmann::ordered_json;

BaselineNorm baseline_norm(const std::vector<TrajectoryProfile> &profiles,
                           const Registry &registry) {
    if (profiles.empty())
        throw DataError("baseline norm needs at least one profile");
    const std::size_t v = profiles.front().v;
    BaselineNorm norm;
    norm.u0.assign(v, 0.0);
    for (const TrajectoryProfile &p : profiles)
        for (std::size_t var = 0; var < v; ++var)
            norm.u0[var] += p.at(var, 0);
    for (double &u : norm.u0) u /= static_cast<double>(profiles.size());
    norm.variable_names.reserve(v);
    for (std::size_t var = 0; var < v; ++var)
        norm.variable_names.push_back(registry.at(var).name);
    return norm;
}

std::vector<SubtypeProfile> community_profiles(
    const std::vector<TrajectoryProfile> &profiles,
    const Partition &partition, const BaselineNorm &norm) {
    if (partition.assignment.size() != profiles.size())
        throw ConfigError(fmt::format(
            "partition covers {} patients, profile list has {}",
            partition.assignment.size(), profiles.size()));
    if (profiles.empty()) throw DataError("no profiles to aggregate");

    const std::size_t v = profiles.front().v;
    const std::size_t m = profiles.front().m;
    const std::size_t communities =
        *std::max_element(partition.assignment.begin(),
                          partition.assignment.end()) +
        1;

    std::vector<SubtypeProfile> out(communities);
    for (std::size_t c = 0; c < communities; ++c) {
        out[c].subtype_id = c;
        out[c].v = v;
        out[c].m = m;
        out[c].raw.assign(v * m, 0.0);
    }
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        SubtypeProfile &profile = out[partition.assignment[i]];
        profile.size += 1;
        for (std::size_t k = 0; k < v * m; ++k)
            profile.raw[k] += profiles[i].bits[k];
    }
    for (SubtypeProfile &profile : out) {
        if (profile.size == 0)
            throw DataError(fmt::format(
                "community {} has no members", profile.subtype_id));
        for (double &x : profile.raw) x /= static_cast<double>(profile.size);
        profile.normalized.resize(v * m);
        for (std::size_t var = 0; var < v; ++var) {
            const double u = norm.u0.at(var);
            for (std::size_t t = 0; t < m; ++t) {
                const double raw = profile.raw[var * m + t];
                // u == 0 leaves the normalized entry undefined; report the
                // raw fraction instead of dividing by zero.
                profile.normalized[var * m + t] = u > 0.0 ? raw / u : raw;
            }
        }
    }
    return out;
}

FilterResult filter_small(std::vector<SubtypeProfile> profiles,
                          std::size_t min_size) {
    FilterResult result;
    for (SubtypeProfile &profile : profiles) {
        if (profile.size >= min_size) {
            profile.subtype_id = result.retained.size();
            result.retained.push_back(std::move(profile));
        } else {
            result.filtered_patients += profile.size;
            result.filtered_communities += 1;
        }
    }
    if (result.retained.empty())
        throw ConfigError(fmt::format(
            "no community reaches the minimum size {}; model would be empty",
            min_size));
    return result;
}

namespace {

ordered_json matrix_to_json(const std::vector<double> &data, std::size_t v,
                            std::size_t m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t var = 0; var < v; ++var) {
        ordered_json row = ordered_json::array();
        for (std::size_t t = 0; t < m; ++t) row.push_back(data[var * m + t]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> matrix_from_json(const ordered_json &rows, std::size_t v,
                                     std::size_t m) {
    if (rows.size() != v)
        throw DataError("model matrix has the wrong number of rows");
    std::vector<double> data;
    data.reserve(v * m);
    for (const auto &row : rows) {
        if (row.size() != m)
            throw DataError("model matrix has the wrong number of columns");
        for (const auto &x : row) data.push_back(x.get<double>());
    }
    return data;
}

ordered_json profile_to_json(const SubtypeProfile &profile) {
    ordered_json j;
    j["id"] = profile.subtype_id;
    j["size"] = profile.size;
    j["raw"] = matrix_to_json(profile.raw, profile.v, profile.m);
    j["normalized"] = matrix_to_json(profile.normalized, profile.v,
                                     profile.m);
    return j;
}

SubtypeProfile profile_from_json(const ordered_json &j, std::size_t v,
                                 std::size_t m) {
    SubtypeProfile profile;
    profile.subtype_id = j.at("id").get<std::size_t>();
    profile.size = j.at("size").get<std::size_t>();
    profile.v = v;
    profile.m = m;
    profile.raw = matrix_from_json(j.at("raw"), v, m);
    profile.normalized = matrix_from_json(j.at("normalized"), v, m);
    return profile;
}

} // namespace

std::string model_to_json(const SubtypeModel &model) {
    ordered_json j;
    j["schema_version"] = SubtypeModel::kSchemaVersion;
    ordered_json vars = ordered_json::array();
    for (const VariableSpec &spec : model.registry.vars()) {
        ordered_json var;
        var["name"] = spec.name;
        var["domain"] = spec.domain_label;
        var["kind"] = spec.kind == VariableKind::Continuous ? "continuous"
                                                            : "binary_static";
        var["direction"] = spec.direction;
        var["source_locus"] = spec.source_locus.value_or("");
        vars.push_back(std::move(var));
    }
    j["variables"] = std::move(vars);
    j["time_labels"] = model.time_labels;
    ordered_json thresholds;
    for (const VariableSpec &spec : model.registry.vars()) {
        auto it = model.thresholds.by_variable.find(spec.name);
        if (it != model.thresholds.by_variable.end())
            thresholds[spec.name] = it->second;
    }
    j["thresholds"] = std::move(thresholds);
    j["weights"] = matrix_to_json(model.weights.w, model.weights.v,
                                  model.weights.m);
    ordered_json u0;
    for (std::size_t var = 0; var < model.norm.u0.size(); ++var)
        u0[model.norm.variable_names[var]] = model.norm.u0[var];
    j["u0"] = std::move(u0);
    ordered_json subtypes = ordered_json::array();
    for (const SubtypeProfile &profile : model.subtypes)
        subtypes.push_back(profile_to_json(profile));
    j["subtypes"] = std::move(subtypes);
    j["population"] = profile_to_json(model.population);
    j["min_community_size"] = model.min_community_size;
    j["seed"] = model.seed;
    j["restarts"] = model.restarts;
    j["filtered_patients"] = model.filtered_patients;
    return j.dump(2) + "\n";
}

SubtypeModel model_from_json(const std::string &json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw DataError(fmt::format("model file is not valid JSON: {}",
                                    e.what()));
    }
    const int version = j.at("schema_version").get<int>();
    if (version != SubtypeModel::kSchemaVersion)
        throw DataError(fmt::format(
            "incompatible model: schema version {} (expected {})", version,
            SubtypeModel::kSchemaVersion));

    SubtypeModel model;
    std::vector<VariableSpec> vars;
    for (const auto &var : j.at("variables")) {
        VariableSpec spec;
        spec.name = var.at("name").get<std::string>();
        spec.domain_label = var.at("domain").get<std::string>();
        spec.kind = var.at("kind").get<std::string>() == "continuous"
                        ? VariableKind::Continuous
                        : VariableKind::BinaryStatic;
        spec.direction = var.at("direction").get<int>();
        const auto locus = var.at("source_locus").get<std::string>();
        if (!locus.empty()) spec.source_locus = locus;
        vars.push_back(std::move(spec));
    }
    model.registry = Registry(std::move(vars));
    model.time_labels =
        j.at("time_labels").get<std::vector<std::string>>();
    for (const auto &[name, theta] : j.at("thresholds").items())
        model.thresholds.by_variable[name] = theta.get<double>();
    const std::size_t v = model.registry.size();
    const std::size_t m = model.time_labels.size();
    model.weights.v = v;
    model.weights.m = m;
    model.weights.w = matrix_from_json(j.at("weights"), v, m);
    for (std::size_t var = 0; var < v; ++var) {
        const std::string &name = model.registry.at(var).name;
        model.norm.variable_names.push_back(name);
        model.norm.u0.push_back(j.at("u0").at(name).get<double>());
    }
    for (const auto &profile : j.at("subtypes"))
        model.subtypes.push_back(profile_from_json(profile, v, m));
    if (model.subtypes.empty())
        throw DataError("model contains no subtypes");
    model.population = profile_from_json(j.at("population"), v, m);
    model.min_community_size = j.at("min_community_size").get<std::size_t>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.restarts = j.at("restarts").get<unsigned>();
    model.filtered_patients = j.at("filtered_patients").get<std::size_t>();
    if (!model.thresholds.covers(model.registry))
        throw DataError("model is missing thresholds for continuous "
                        "variables");
    return model;
}

void save_model(const SubtypeModel &model, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write file: {}", path));
    out << model_to_json(model);
}

SubtypeModel load_model(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open file: {}", path));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

} // namespace tpc
