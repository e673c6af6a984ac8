#include "lifespan/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lifespan::par {

namespace {
std::atomic<int> g_threads{0};  // 0 = runtime default
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int thread_count() {
    const int n = g_threads.load();
    if (n == 0) return hardware_threads();
    return n;
}

}  // namespace lifespan::par
