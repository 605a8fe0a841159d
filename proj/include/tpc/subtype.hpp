#pragma once

#include "tpc/community.hpp"
#include "tpc/similarity.hpp"
#include "tpc/trajectory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tpc {

// Population baseline mean of each variable's profile bit, the
// normalization constant for subtype profiles. Computed on training
// profiles only.
struct BaselineNorm {
    std::vector<std::string> variable_names;
    std::vector<double> u0; // per variable, in [0, 1]
};

BaselineNorm baseline_norm(const std::vector<TrajectoryProfile> &profiles,
                           const Registry &registry);

// Mean trajectory profile of one community. `raw` is the member fraction in
// [0,1]; `normalized` divides each row by the population baseline mean.
// Where that mean is zero the normalized entry is undefined and falls back
// to the raw value.
struct SubtypeProfile {
    std::size_t subtype_id = 0;
    std::size_t size = 0;          // N_l
    std::size_t v = 0;
    std::size_t m = 0;
    std::vector<double> raw;        // v*m
    std::vector<double> normalized; // v*m

    double raw_at(std::size_t var, std::size_t t) const {
        return raw[var * m + t];
    }
    double normalized_at(std::size_t var, std::size_t t) const {
        return normalized[var * m + t];
    }
};

std::vector<SubtypeProfile> community_profiles(
    const std::vector<TrajectoryProfile> &profiles,
    const Partition &partition, const BaselineNorm &norm);

struct FilterResult {
    std::vector<SubtypeProfile> retained; // subtype ids renumbered from 0
    std::size_t filtered_patients = 0;
    std::size_t filtered_communities = 0;
};

FilterResult filter_small(std::vector<SubtypeProfile> profiles,
                          std::size_t min_size = 10);

// Everything needed to binarize and assign an unseen patient.
struct SubtypeModel {
    static constexpr int kSchemaVersion = 1;

    Registry registry;
    std::vector<std::string> time_labels;
    Thresholds thresholds;
    WeightScheme weights;
    BaselineNorm norm;
    std::vector<SubtypeProfile> subtypes;
    SubtypeProfile population; // all-training profile, for rendering
    std::size_t min_community_size = 10;
    std::uint64_t seed = 0;
    unsigned restarts = 16;
    std::size_t filtered_patients = 0;

    std::size_t v() const { return registry.size(); }
    std::size_t m() const { return time_labels.size(); }
};

std::string model_to_json(const SubtypeModel &model);
SubtypeModel model_from_json(const std::string &json_text);
void save_model(const SubtypeModel &model, const std::string &path);
SubtypeModel load_model(const std::string &path);

} // namespace tpc
