#pragma once

#include "tpc/similarity.hpp"

#include <cstdint>
#include <vector>

namespace tpc {

struct Partition {
    std::vector<std::size_t> assignment; // contiguous community ids from 0
    double modularity = 0.0;             // Q of this assignment on its network

    std::size_t community_count() const;
};

// Newman-Girvan modularity with weighted degrees:
//   Q = sum_c [ in_c / 2m - (tot_c / 2m)^2 ]
// where in_c counts both directions of every within-community edge.
double modularity(const SimilarityNetwork &network,
                  const std::vector<std::size_t> &assignment);

// Louvain heuristic: repeated greedy node moves accepting only strictly
// positive modularity gains (ties go to the lowest community index), then
// aggregation, until no level improves. Best partition over `restarts`
// seeded node orders. Deterministic for fixed (network, seed, restarts).
Partition louvain(const SimilarityNetwork &network, std::uint64_t seed,
                  unsigned restarts = 16);

// Single Louvain run with an explicit first-level visit order. Exposed so
// relabeling-equivariance tests can align runs across permuted networks.
Partition louvain_with_order(const SimilarityNetwork &network,
                             const std::vector<std::size_t> &node_order);

// Exhaustive oracle: enumerates every set partition (N <= 10) and returns
// the global modularity maximizer; ties broken by fewest communities, then
// by the first partition in restricted-growth-string order.
Partition brute_force_partition(const SimilarityNetwork &network);

} // namespace tpc
