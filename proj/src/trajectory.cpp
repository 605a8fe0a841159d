#include "tpc/trajectory.hpp"

#include "tpc/errors.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace tpc {

double median(std::vector<double> values) {
    if (values.empty()) throw DataError("median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

OrientedValues orient(const LongitudinalCohort &cohort) {
    OrientedValues out;
    out.n = cohort.n();
    out.v = cohort.v();
    out.m = cohort.m();
    out.y = cohort.values;
    for (std::size_t var = 0; var < out.v; ++var) {
        const VariableSpec &spec = cohort.registry.at(var);
        if (spec.kind != VariableKind::Continuous || spec.direction == 1)
            continue;
        for (std::size_t i = 0; i < out.n; ++i)
            for (std::size_t t = 0; t < out.m; ++t)
                out.y[out.idx(i, var, t)] = -out.y[out.idx(i, var, t)];
    }
    return out;
}

Thresholds fit_thresholds(const OrientedValues &oriented,
                          const Registry &registry,
                          const std::string &provenance) {
    if (oriented.n == 0) throw DataError("cannot fit thresholds: no patients");
    Thresholds thresholds;
    thresholds.provenance = provenance;
    for (std::size_t var = 0; var < oriented.v; ++var) {
        if (registry.at(var).kind != VariableKind::Continuous) continue;
        std::vector<double> baseline(oriented.n);
        for (std::size_t i = 0; i < oriented.n; ++i)
            baseline[i] = oriented.at(i, var, 0);
        thresholds.by_variable[registry.at(var).name] = median(baseline);
    }
    return thresholds;
}

bool Thresholds::covers(const Registry &registry) const {
    for (const VariableSpec &spec : registry.vars())
        if (spec.kind == VariableKind::Continuous &&
            by_variable.find(spec.name) == by_variable.end())
            return false;
    return true;
}

std::vector<TrajectoryProfile> binarize(const OrientedValues &oriented,
                                        const std::vector<std::string>
                                            &patient_ids,
                                        const Thresholds &thresholds,
                                        const Registry &registry) {
    if (patient_ids.size() != oriented.n)
        throw ConfigError("patient id list does not match oriented array");
    std::vector<double> theta(oriented.v, 0.0);
    std::vector<bool> continuous(oriented.v, false);
    for (std::size_t var = 0; var < oriented.v; ++var) {
        const VariableSpec &spec = registry.at(var);
        if (spec.kind != VariableKind::Continuous) continue;
        auto it = thresholds.by_variable.find(spec.name);
        if (it == thresholds.by_variable.end())
            throw ConfigError(fmt::format(
                "no threshold fitted for continuous variable '{}'",
                spec.name));
        theta[var] = it->second;
        continuous[var] = true;
    }

    std::vector<TrajectoryProfile> profiles(oriented.n);
    for (std::size_t i = 0; i < oriented.n; ++i) {
        TrajectoryProfile &profile = profiles[i];
        profile.patient_id = patient_ids[i];
        profile.v = oriented.v;
        profile.m = oriented.m;
        profile.bits.resize(oriented.v * oriented.m);
        for (std::size_t var = 0; var < oriented.v; ++var)
            for (std::size_t t = 0; t < oriented.m; ++t) {
                const double y = oriented.at(i, var, t);
                profile.bits[var * oriented.m + t] =
                    continuous[var] ? (y > theta[var] ? 1 : 0)
                                    : (y != 0.0 ? 1 : 0);
            }
    }
    return profiles;
}

} // namespace tpc
