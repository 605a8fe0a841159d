#include "tpc/prediction.hpp"

#include "tpc/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace tpc {

namespace {

double column_distance_sq(const TrajectoryProfile &patient,
                          const SubtypeProfile &profile, std::size_t t,
                          ProfileKind kind) {
    double sum = 0.0;
    for (std::size_t var = 0; var < patient.v; ++var) {
        const double s = kind == ProfileKind::Raw
                             ? profile.raw_at(var, t)
                             : profile.normalized_at(var, t);
        const double d = static_cast<double>(patient.at(var, t)) - s;
        sum += d * d;
    }
    return sum;
}

} // namespace

Assignment assign_at_time(const TrajectoryProfile &patient,
                          const SubtypeModel &model, std::size_t t,
                          ProfileKind kind) {
    if (model.subtypes.empty())
        throw DataError("model contains no subtypes");
    if (t >= model.m())
        throw ConfigError(fmt::format(
            "time index {} out of range (model has {} time points)", t,
            model.m()));
    if (patient.v != model.v() || patient.m != model.m())
        throw ConfigError(fmt::format(
            "patient profile shape {}x{} does not match model {}x{}",
            patient.v, patient.m, model.v(), model.m()));

    const SubtypeProfile *best = nullptr;
    double best_sq = 0.0;
    for (const SubtypeProfile &candidate : model.subtypes) {
        const double sq = column_distance_sq(patient, candidate, t, kind);
        const bool better =
            best == nullptr || sq < best_sq ||
            (sq == best_sq && (candidate.size > best->size ||
                               (candidate.size == best->size &&
                                candidate.subtype_id < best->subtype_id)));
        if (better) {
            best = &candidate;
            best_sq = sq;
        }
    }
    return Assignment{patient.patient_id, t, best->subtype_id,
                      std::sqrt(best_sq)};
}

AccuracyReport prediction_accuracy(const std::vector<TrajectoryProfile>
                                       &test_patients,
                                   const SubtypeModel &model, std::size_t t,
                                   ProfileKind kind) {
    if (test_patients.empty())
        throw ConfigError("prediction accuracy needs a non-empty test set");
    if (t < 1)
        throw ConfigError("prediction horizon must be at least 1");
    if (t >= model.m())
        throw ConfigError(fmt::format(
            "time index {} out of range (model has {} time points)", t,
            model.m()));

    AccuracyReport report;
    report.horizon = t;
    report.total = test_patients.size();
    report.accuracy_by_time.assign(model.m(), 1.0);
    std::vector<std::size_t> matched_by_time(model.m(), 0);

    for (const TrajectoryProfile &patient : test_patients) {
        PatientTrajectory trajectory;
        trajectory.patient_id = patient.patient_id;
        for (std::size_t ti = 0; ti < model.m(); ++ti) {
            trajectory.assignments.push_back(
                assign_at_time(patient, model, ti, kind));
            std::vector<double> row;
            row.reserve(model.subtypes.size());
            for (const SubtypeProfile &profile : model.subtypes)
                row.push_back(std::sqrt(
                    column_distance_sq(patient, profile, ti, kind)));
            trajectory.distances.push_back(std::move(row));
        }
        const std::size_t baseline = trajectory.assignments[0].subtype_id;
        for (std::size_t ti = 1; ti < model.m(); ++ti)
            if (trajectory.assignments[ti].subtype_id == baseline)
                matched_by_time[ti] += 1;
        report.patients.push_back(std::move(trajectory));
    }

    for (std::size_t ti = 1; ti < model.m(); ++ti)
        report.accuracy_by_time[ti] =
            static_cast<double>(matched_by_time[ti]) /
            static_cast<double>(report.total);
    report.matched = matched_by_time[t];
    report.accuracy = report.accuracy_by_time[t];
    return report;
}

} // namespace tpc
