// AVX2 variants of the pairwise comparison kernels. Compiled with -mavx2 in
// its own translation unit; callers reach it only through the runtime
// dispatch in kernels.cpp after a cpuid check.

#include "tpc/kernels.hpp"

#if defined(TPC_HAVE_AVX2)

#include <immintrin.h>

#include <cstring>

namespace tpc::kernels::detail {

namespace {
inline int load_u32(const std::uint8_t *p) {
    int v;
    std::memcpy(&v, p, sizeof v);
    return v;
}
} // namespace

std::size_t match_count_avx2(const std::uint8_t *a, const std::uint8_t *b,
                             std::size_t n) {
    std::size_t matches = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va =
            _mm256_loadu_si256(reinterpret_cast<const __m256i *>(a + i));
        const __m256i vb =
            _mm256_loadu_si256(reinterpret_cast<const __m256i *>(b + i));
        const __m256i eq = _mm256_cmpeq_epi8(va, vb);
        matches += static_cast<std::size_t>(__builtin_popcount(
            static_cast<unsigned>(_mm256_movemask_epi8(eq))));
    }
    for (; i < n; ++i)
        matches += (a[i] == b[i]) ? 1 : 0;
    return matches;
}

double weighted_match_avx2(const std::uint8_t *a, const std::uint8_t *b,
                           const double *w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // Widen 4 bytes of each profile to 64-bit lanes, compare, and use
        // the all-ones lanes to gate the weight vector.
        const __m128i a4 = _mm_cvtsi32_si128(load_u32(a + i));
        const __m128i b4 = _mm_cvtsi32_si128(load_u32(b + i));
        const __m256i eq = _mm256_cmpeq_epi64(_mm256_cvtepu8_epi64(a4),
                                              _mm256_cvtepu8_epi64(b4));
        const __m256d wv = _mm256_loadu_pd(w + i);
        acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_castsi256_pd(eq), wv));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
    for (; i < n; ++i)
        if (a[i] == b[i]) sum += w[i];
    return sum;
}

} // namespace tpc::kernels::detail

#endif // TPC_HAVE_AVX2
