#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Data-parallel inner loops behind the pairwise profile comparisons. The
// similarity matrix evaluates one of these kernels for every patient pair,
// so they carry the bulk of the arithmetic. Scalar reference versions always
// exist; an AVX2 variant is selected at runtime when the CPU supports it.
// Set TPC_KERNEL=scalar (or avx2) to force a backend.
namespace tpc::kernels {

struct Backend {
    const char *name;
    // Number of positions where a[i] == b[i]; inputs are 0/1 bytes.
    std::size_t (*match_count)(const std::uint8_t *a, const std::uint8_t *b,
                               std::size_t n);
    // Sum of w[i] over positions where a[i] == b[i].
    double (*weighted_match)(const std::uint8_t *a, const std::uint8_t *b,
                             const double *w, std::size_t n);
};

namespace detail {
std::size_t match_count_scalar(const std::uint8_t *a, const std::uint8_t *b,
                               std::size_t n);
double weighted_match_scalar(const std::uint8_t *a, const std::uint8_t *b,
                             const double *w, std::size_t n);
#if defined(TPC_HAVE_AVX2)
std::size_t match_count_avx2(const std::uint8_t *a, const std::uint8_t *b,
                             std::size_t n);
double weighted_match_avx2(const std::uint8_t *a, const std::uint8_t *b,
                           const double *w, std::size_t n);
#endif
} // namespace detail

const Backend &scalar();

// Backend chosen at startup from CPU support and the TPC_KERNEL override.
const Backend &active();

inline std::size_t match_count(const std::uint8_t *a, const std::uint8_t *b,
                               std::size_t n) {
    return active().match_count(a, b, n);
}

inline double weighted_match(const std::uint8_t *a, const std::uint8_t *b,
                             const double *w, std::size_t n) {
    return active().weighted_match(a, b, w, n);
}

} // namespace tpc::kernels
