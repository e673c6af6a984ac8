#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lifespan::par {

/// Number of worker threads used by parallel_for / blocked_sum.
/// 0 (the default) means the OpenMP runtime default.
void set_thread_count(int n);
int thread_count();      // resolved count (>= 1)
int hardware_threads();  // what the runtime would use at most

inline bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

/// Runs f(i) for i in [0, n). Parallel when OpenMP is available, the configured
/// thread count allows it, and we are not already inside a parallel region.
/// Iterations must be independent; results must not depend on execution order.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
    if (thread_count() > 1 && n > 1 && !omp_in_parallel()) {
        #pragma omp parallel for schedule(static) num_threads(thread_count())
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

inline constexpr std::size_t kSumBlock = 1024;

/// Sum of term(i) for i in [0, n), blocked so that the result is bitwise
/// identical for every thread count: each fixed 1024-element block is summed
/// serially and the per-block partials are combined in index order.
template <typename F>
double blocked_sum(std::size_t n, F&& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    if (nblocks == 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += term(i);
        return s;
    }
    std::vector<double> partial(nblocks);
    parallel_for(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kSumBlock;
        const std::size_t hi = lo + kSumBlock < n ? lo + kSumBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace lifespan::par
