#pragma once

#include "tpc/cohort.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tpc {

// Severity-oriented copy of a cohort's value array: continuous variables are
// multiplied by their direction so that larger always means more severe;
// binary variables pass through unchanged. Same [i][v][t] layout.
struct OrientedValues {
    std::size_t n = 0;
    std::size_t v = 0;
    std::size_t m = 0;
    std::vector<double> y;

    std::size_t idx(std::size_t i, std::size_t var, std::size_t t) const {
        return (i * v + var) * m + t;
    }
    double at(std::size_t i, std::size_t var, std::size_t t) const {
        return y[idx(i, var, t)];
    }
};

// Per-variable baseline medians of the oriented training values. Defined for
// continuous variables only; fit once on the training population and reused
// for every later binarization, including held-out patients.
struct Thresholds {
    std::map<std::string, double> by_variable;
    std::string provenance; // label of the cohort they were fit on

    bool covers(const Registry &registry) const;
};

// A patient's V x M binary trajectory profile, entries in {0, 1}.
struct TrajectoryProfile {
    std::string patient_id;
    std::size_t v = 0;
    std::size_t m = 0;
    std::vector<std::uint8_t> bits; // row-major [v][t]

    std::uint8_t at(std::size_t var, std::size_t t) const {
        return bits[var * m + t];
    }
};

OrientedValues orient(const LongitudinalCohort &cohort);

Thresholds fit_thresholds(const OrientedValues &oriented,
                          const Registry &registry,
                          const std::string &provenance = "");

// Continuous entries become 1 when the oriented value strictly exceeds the
// variable's threshold (ties map to 0); binary entries pass through.
std::vector<TrajectoryProfile> binarize(const OrientedValues &oriented,
                                        const std::vector<std::string>
                                            &patient_ids,
                                        const Thresholds &thresholds,
                                        const Registry &registry);

double median(std::vector<double> values);

} // namespace tpc
