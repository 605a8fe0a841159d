#pragma once

#include "tpc/subtype.hpp"

#include <string>
#include <vector>

namespace tpc {

enum class ProfileKind { Raw, Normalized };

struct Assignment {
    std::string patient_id;
    std::size_t time_index = 0;
    std::size_t subtype_id = 0;
    double distance = 0.0;
};

struct PatientTrajectory {
    std::string patient_id;
    std::vector<Assignment> assignments;       // one per time index
    std::vector<std::vector<double>> distances; // [t][subtype]
};

struct AccuracyReport {
    std::size_t horizon = 0;
    std::size_t matched = 0;
    std::size_t total = 0;
    double accuracy = 0.0;
    std::vector<double> accuracy_by_time; // index t >= 1; index 0 unused (1.0)
    std::vector<PatientTrajectory> patients;
};

// Assigns the patient to the subtype whose profile column at time t has the
// smallest Euclidean distance from the patient's profile column. Ties go to
// the larger subtype, then to the lower subtype id.
Assignment assign_at_time(const TrajectoryProfile &patient,
                          const SubtypeModel &model, std::size_t t,
                          ProfileKind kind = ProfileKind::Raw);

// Fraction of test patients whose baseline assignment matches their
// assignment at time t. Requires t >= 1.
AccuracyReport prediction_accuracy(const std::vector<TrajectoryProfile>
                                       &test_patients,
                                   const SubtypeModel &model, std::size_t t,
                                   ProfileKind kind = ProfileKind::Raw);

} // namespace tpc
