#pragma once

#include "tpc/trajectory.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tpc {

// Per-entry weights w[v][t] for the similarity sum. All ones reproduces the
// plain match count.
struct WeightScheme {
    std::size_t v = 0;
    std::size_t m = 0;
    std::vector<double> w; // row-major [v][t]

    static WeightScheme unit(std::size_t v, std::size_t m);
    bool is_unit() const;
    double total() const;
    double at(std::size_t var, std::size_t t) const { return w[var * m + t]; }
};

WeightScheme load_weights(const std::string &path, std::size_t v,
                          std::size_t m);

// Complete patient-patient network. weights[i][j] sums the (weighted)
// profile entries on which patients i and j agree; the diagonal is zero.
struct SimilarityNetwork {
    std::vector<std::string> patient_ids;
    std::size_t n = 0;
    std::vector<double> weights; // n*n, symmetric, zero diagonal
    double max_weight = 0.0;     // sum of all entry weights (V*M if unit)

    double at(std::size_t i, std::size_t j) const {
        return weights[i * n + j];
    }
};

SimilarityNetwork similarity_matrix(const std::vector<TrajectoryProfile>
                                        &profiles,
                                    const WeightScheme &weights);

// Independent oracle: plain element-count loop, deliberately not routed
// through the kernel dispatch. P[i][j] + hamming == V*M under unit weights.
std::size_t hamming_check(const std::vector<TrajectoryProfile> &profiles,
                          std::size_t i, std::size_t j);

void save_network_csv(const SimilarityNetwork &network,
                      const std::string &path);

// Zeroes out edges below the cutoff; experimentation hook, off by default.
void apply_min_edge(SimilarityNetwork &network, double min_edge);

} // namespace tpc
