#pragma once

#include "tpc/cohort.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tpc {

// Planted-subtype cohort description. Each patient copies one of K
// prototype bit matrices (drawn by weight), suffers independent bit flips,
// and is emitted as a longitudinal cohort: continuous variables as
// bit + uniform(-0.4, 0.4) jitter (times the variable's direction), binary
// variables as the bit itself.
struct SyntheticSpec {
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    Registry registry; // all emitted columns, one-hot loci already expanded
    std::vector<double> subtype_weights;                // size k, positive
    double flip_noise = 0.0;                            // in [0, 0.5)
    std::vector<std::vector<std::uint8_t>> prototypes;  // k matrices, V*m
    std::uint64_t seed = 1;

    std::size_t v() const { return registry.size(); }
};

struct LabeledCohort {
    LongitudinalCohort cohort;
    std::vector<std::size_t> true_labels;
};

// Builder options for a planted spec whose prototypes support pipeline
// verification: subtype counts are apportioned exactly, and when a subset of
// counts sums to N/2 the continuous baseline patterns are balanced so the
// training medians fall between the emitted value clusters (zero-noise runs
// then recover every bit exactly). Binary code columns keep baselines of
// different subtypes at Hamming distance >= 2.
struct PlantedSpecOptions {
    std::size_t k = 3;
    std::size_t n = 198;
    std::size_t v = 18; // base variables (continuous + binary code columns)
    std::size_t m = 5;
    double continuous_fraction = -1.0; // < 0: derived from k
    std::vector<double> subtype_weights; // empty: equal
    double flip_noise = 0.05;
    double min_separation = 0.4; // pairwise prototype Hamming, fraction of V*m
    bool gender = false;
    std::size_t loci = 0; // one-hot genotype triples appended per locus
    std::uint64_t seed = 1;
};

SyntheticSpec make_planted_spec(const PlantedSpecOptions &options);

LabeledCohort generate_cohort(const SyntheticSpec &spec);

// Exact subtype counts used by generate_cohort (largest-remainder
// apportionment of weights to n).
std::vector<std::size_t> apportion_counts(const std::vector<double> &weights,
                                          std::size_t n);

double adjusted_rand_index(const std::vector<std::size_t> &labels_a,
                           const std::vector<std::size_t> &labels_b);

void save_labels(const LabeledCohort &labeled, const std::string &path);
std::vector<std::pair<std::string, std::size_t>> load_labels(
    const std::string &path);

std::string spec_to_json(const SyntheticSpec &spec);
SyntheticSpec spec_from_json(const std::string &json_text);
void save_spec(const SyntheticSpec &spec, const std::string &path);
SyntheticSpec load_spec(const std::string &path);

} // namespace tpc
