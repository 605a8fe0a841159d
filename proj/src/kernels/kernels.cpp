#include "tpc/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace tpc::kernels {

namespace detail {

std::size_t match_count_scalar(const std::uint8_t *a, const std::uint8_t *b,
                               std::size_t n) {
    std::size_t matches = 0;
    for (std::size_t i = 0; i < n; ++i)
        matches += (a[i] == b[i]) ? 1 : 0;
    return matches;
}

double weighted_match_scalar(const std::uint8_t *a, const std::uint8_t *b,
                             const double *w, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] == b[i]) sum += w[i];
    return sum;
}

} // namespace detail

const Backend &scalar() {
    static const Backend backend{"scalar", detail::match_count_scalar,
                                 detail::weighted_match_scalar};
    return backend;
}

#if defined(TPC_HAVE_AVX2)
static const Backend &avx2() {
    static const Backend backend{"avx2", detail::match_count_avx2,
                                 detail::weighted_match_avx2};
    return backend;
}
#endif

static const Backend &select() {
    const char *forced = std::getenv("TPC_KERNEL");
    if (forced != nullptr) {
        if (std::strcmp(forced, "scalar") == 0) return scalar();
#if defined(TPC_HAVE_AVX2)
        if (std::strcmp(forced, "avx2") == 0 &&
            __builtin_cpu_supports("avx2"))
            return avx2();
#endif
        return scalar();
    }
#if defined(TPC_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return avx2();
#endif
    return scalar();
}

const Backend &active() {
    static const Backend &backend = select();
    return backend;
}

} // namespace tpc::kernels
