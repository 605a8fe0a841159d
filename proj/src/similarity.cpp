#include "tpc/similarity.hpp"

#include "tpc/errors.hpp"
#include "tpc/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace tpc {

WeightScheme WeightScheme::unit(std::size_t v, std::size_t m) {
    WeightScheme scheme;
    scheme.v = v;
    scheme.m = m;
    scheme.w.assign(v * m, 1.0);
    return scheme;
}

bool WeightScheme::is_unit() const {
    return std::all_of(w.begin(), w.end(),
                       [](double x) { return x == 1.0; });
}

double WeightScheme::total() const {
    return std::accumulate(w.begin(), w.end(), 0.0);
}

WeightScheme load_weights(const std::string &path, std::size_t v,
                          std::size_t m) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open file: {}", path));
    WeightScheme scheme;
    scheme.v = v;
    scheme.m = m;
    scheme.w.reserve(v * m);
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string token;
        while (std::getline(ss, token, ',')) {
            double x = 0.0;
            auto [ptr, ec] =
                std::from_chars(token.data(), token.data() + token.size(), x);
            if (ec != std::errc{} || ptr != token.data() + token.size())
                throw DataError(fmt::format(
                    "{}:{}: non-numeric weight '{}'", path, ln, token));
            if (x < 0.0)
                throw DataError(fmt::format("{}:{}: negative weight {}", path,
                                            ln, x));
            scheme.w.push_back(x);
        }
    }
    if (scheme.w.size() != v * m)
        throw DataError(fmt::format(
            "{}: expected {}x{} = {} weights, found {}", path, v, m, v * m,
            scheme.w.size()));
    if (scheme.total() == 0.0)
        throw DataError(fmt::format("{}: weights must not all be zero", path));
    return scheme;
}

SimilarityNetwork similarity_matrix(const std::vector<TrajectoryProfile>
                                        &profiles,
                                    const WeightScheme &weights) {
    if (profiles.size() < 2)
        throw DataError(fmt::format(
            "similarity network needs at least 2 profiles, got {}",
            profiles.size()));
    const std::size_t v = profiles.front().v;
    const std::size_t m = profiles.front().m;
    for (const TrajectoryProfile &p : profiles)
        if (p.v != v || p.m != m)
            throw ConfigError(fmt::format(
                "profile '{}' has shape {}x{}, expected {}x{}", p.patient_id,
                p.v, p.m, v, m));
    if (weights.v != v || weights.m != m)
        throw ConfigError(fmt::format(
            "weight scheme has shape {}x{}, expected {}x{}", weights.v,
            weights.m, v, m));
    if (weights.total() == 0.0)
        throw ConfigError("weights must not all be zero");

    SimilarityNetwork network;
    network.n = profiles.size();
    network.patient_ids.reserve(network.n);
    for (const TrajectoryProfile &p : profiles)
        network.patient_ids.push_back(p.patient_id);
    network.weights.assign(network.n * network.n, 0.0);
    network.max_weight = weights.total();

    const bool unit = weights.is_unit();
    const std::size_t len = v * m;
    for (std::size_t i = 0; i < network.n; ++i) {
        const std::uint8_t *a = profiles[i].bits.data();
        for (std::size_t j = i + 1; j < network.n; ++j) {
            const std::uint8_t *b = profiles[j].bits.data();
            const double p =
                unit ? static_cast<double>(kernels::match_count(a, b, len))
                     : kernels::weighted_match(a, b, weights.w.data(), len);
            network.weights[i * network.n + j] = p;
            network.weights[j * network.n + i] = p;
        }
    }
    return network;
}

std::size_t hamming_check(const std::vector<TrajectoryProfile> &profiles,
                          std::size_t i, std::size_t j) {
    const TrajectoryProfile &a = profiles.at(i);
    const TrajectoryProfile &b = profiles.at(j);
    if (a.bits.size() != b.bits.size())
        throw ConfigError("profiles differ in shape");
    std::size_t distance = 0;
    for (std::size_t k = 0; k < a.bits.size(); ++k)
        if (a.bits[k] != b.bits[k]) ++distance;
    return distance;
}

void save_network_csv(const SimilarityNetwork &network,
                      const std::string &path) {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write file: {}", path));
    out << "patient_id";
    for (const std::string &id : network.patient_ids) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < network.n; ++i) {
        out << network.patient_ids[i];
        for (std::size_t j = 0; j < network.n; ++j) {
            char buf[32];
            auto [ptr, ec] =
                std::to_chars(buf, buf + sizeof buf, network.at(i, j));
            out << ',' << std::string_view(buf, ptr);
        }
        out << '\n';
    }
}

void apply_min_edge(SimilarityNetwork &network, double min_edge) {
    for (double &w : network.weights)
        if (w < min_edge) w = 0.0;
}

} // namespace tpc
