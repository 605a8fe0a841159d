#include "tpc/community.hpp"

#include "tpc/errors.hpp"
#include "tpc/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace tpc {

namespace {

constexpr double kGainTolerance = 1e-12;

// Aggregated graph carried between Louvain levels. The diagonal stores the
// total both-direction internal weight of the collapsed community, so node
// degrees and 2m stay consistent with the original network.
struct DenseGraph {
    std::size_t n = 0;
    std::vector<double> w;      // n*n
    std::vector<double> degree; // includes the self-loop once
    double two_m = 0.0;

    double at(std::size_t i, std::size_t j) const { return w[i * n + j]; }
};

DenseGraph from_network(const SimilarityNetwork &network) {
    DenseGraph g;
    g.n = network.n;
    g.w = network.weights;
    g.degree.assign(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        double k = 0.0;
        for (std::size_t j = 0; j < g.n; ++j) k += g.at(i, j);
        g.degree[i] = k;
        g.two_m += k;
    }
    return g;
}

// One pass structure of local moves until no node improves. Returns the
// node-to-community map with communities renumbered by first appearance in
// the visit order (keeps the numbering covariant under node relabeling).
std::vector<std::size_t> local_moves(const DenseGraph &g,
                                     const std::vector<std::size_t> &order) {
    const double m = g.two_m / 2.0;
    std::vector<std::size_t> n2c(g.n);
    std::iota(n2c.begin(), n2c.end(), 0);
    std::vector<double> tot = g.degree;

    std::vector<double> links(g.n, 0.0);
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t u : order) {
            const std::size_t old_c = n2c[u];
            std::fill(links.begin(), links.end(), 0.0);
            for (std::size_t v = 0; v < g.n; ++v)
                if (v != u) links[n2c[v]] += g.at(u, v);

            const double k_u = g.degree[u];
            const double base = links[old_c] / m -
                                k_u * (tot[old_c] - k_u) / (2.0 * m * m);
            std::size_t best_c = old_c;
            double best_gain = 0.0;
            for (std::size_t c = 0; c < g.n; ++c) {
                if (c == old_c || links[c] <= 0.0) continue;
                const double gain = links[c] / m -
                                    k_u * tot[c] / (2.0 * m * m) - base;
                if (gain > best_gain + kGainTolerance) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            if (best_c != old_c) {
                tot[old_c] -= k_u;
                tot[best_c] += k_u;
                n2c[u] = best_c;
                moved = true;
            }
        }
    }

    std::vector<std::size_t> renumber(g.n, SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t u : order)
        if (renumber[n2c[u]] == SIZE_MAX) renumber[n2c[u]] = next++;
    for (std::size_t u = 0; u < g.n; ++u) n2c[u] = renumber[n2c[u]];
    return n2c;
}

DenseGraph aggregate(const DenseGraph &g, const std::vector<std::size_t> &n2c,
                     std::size_t communities) {
    DenseGraph out;
    out.n = communities;
    out.w.assign(communities * communities, 0.0);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            out.w[n2c[i] * communities + n2c[j]] += g.at(i, j);
    out.degree.assign(communities, 0.0);
    for (std::size_t c = 0; c < communities; ++c) {
        double k = 0.0;
        for (std::size_t d = 0; d < communities; ++d) k += out.at(c, d);
        out.degree[c] = k;
    }
    out.two_m = g.two_m;
    return out;
}

std::vector<std::size_t> canonical(std::vector<std::size_t> assignment) {
    std::vector<std::size_t> renumber(assignment.size(), SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t &a : assignment) {
        if (renumber[a] == SIZE_MAX) renumber[a] = next++;
        a = renumber[a];
    }
    return assignment;
}

} // namespace

std::size_t Partition::community_count() const {
    if (assignment.empty()) return 0;
    return *std::max_element(assignment.begin(), assignment.end()) + 1;
}

double modularity(const SimilarityNetwork &network,
                  const std::vector<std::size_t> &assignment) {
    const std::size_t n = network.n;
    if (assignment.size() != n)
        throw ConfigError(fmt::format(
            "assignment covers {} nodes, network has {}", assignment.size(),
            n));
    std::vector<double> degree(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double k = 0.0;
        for (std::size_t j = 0; j < n; ++j) k += network.at(i, j);
        degree[i] = k;
        two_m += k;
    }
    if (two_m <= 0.0)
        throw DataError("modularity undefined: network has zero total weight");

    std::size_t communities = 0;
    for (std::size_t a : assignment) {
        if (a >= n)
            throw ConfigError(fmt::format("community index {} out of range",
                                          a));
        communities = std::max(communities, a + 1);
    }
    std::vector<double> in(communities, 0.0);
    std::vector<double> tot(communities, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        tot[assignment[i]] += degree[i];
        for (std::size_t j = 0; j < n; ++j)
            if (assignment[i] == assignment[j]) in[assignment[i]] +=
                network.at(i, j);
    }
    double q = 0.0;
    for (std::size_t c = 0; c < communities; ++c) {
        const double frac = tot[c] / two_m;
        q += in[c] / two_m - frac * frac;
    }
    return q;
}

Partition louvain_with_order(const SimilarityNetwork &network,
                             const std::vector<std::size_t> &node_order) {
    if (network.n < 2)
        throw ConfigError("louvain needs at least 2 nodes");
    if (node_order.size() != network.n)
        throw ConfigError("node order does not cover the network");

    DenseGraph g = from_network(network);
    if (g.two_m <= 0.0)
        throw DataError("modularity undefined: network has zero total weight");

    // node_to_final[i] = community of original node i on the current level.
    std::vector<std::size_t> node_to_final(network.n);
    std::iota(node_to_final.begin(), node_to_final.end(), 0);
    std::vector<std::size_t> order = node_order;

    while (true) {
        const std::vector<std::size_t> n2c = local_moves(g, order);
        const std::size_t communities =
            *std::max_element(n2c.begin(), n2c.end()) + 1;
        if (communities == g.n) break;
        for (std::size_t &c : node_to_final) c = n2c[c];
        g = aggregate(g, n2c, communities);
        order.resize(communities);
        std::iota(order.begin(), order.end(), 0);
    }

    Partition partition;
    partition.assignment = canonical(std::move(node_to_final));
    partition.modularity = modularity(network, partition.assignment);
    return partition;
}

Partition louvain(const SimilarityNetwork &network, std::uint64_t seed,
                  unsigned restarts) {
    if (restarts == 0) throw ConfigError("restarts must be positive");
    Partition best;
    bool have_best = false;
    for (unsigned r = 0; r < restarts; ++r) {
        std::vector<std::size_t> order(network.n);
        std::iota(order.begin(), order.end(), 0);
        Rng rng(derive_seed(seed, 1000 + r));
        rng.shuffle(order);
        Partition candidate = louvain_with_order(network, order);
        if (!have_best || candidate.modularity > best.modularity) {
            best = std::move(candidate);
            have_best = true;
        }
    }
    return best;
}

Partition brute_force_partition(const SimilarityNetwork &network) {
    const std::size_t n = network.n;
    if (n > 10)
        throw ConfigError(fmt::format(
            "brute-force partition search is limited to 10 nodes, got {}",
            n));
    if (n == 0) throw ConfigError("empty network");
    if (n == 1) return Partition{{0}, 0.0};

    // Restricted growth strings enumerate every set partition exactly once,
    // in lexicographic order; keeping the first of equal candidates makes
    // the lexicographic tie-break implicit.
    std::vector<std::size_t> rgs(n, 0);
    std::vector<std::size_t> prefix_max(n, 0);
    Partition best;
    std::size_t best_communities = 0;
    bool have_best = false;

    while (true) {
        const double q = modularity(network, rgs);
        const std::size_t communities =
            *std::max_element(rgs.begin(), rgs.end()) + 1;
        if (!have_best || q > best.modularity ||
            (q == best.modularity && communities < best_communities)) {
            best.assignment = rgs;
            best.modularity = q;
            best_communities = communities;
            have_best = true;
        }

        // Advance to the next restricted growth string. rgs[0] stays 0.
        std::size_t i = n - 1;
        while (rgs[i] > prefix_max[i - 1]) {
            if (--i == 0) return best;
        }
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[j - 1];
        }
    }
}

} // namespace tpc
