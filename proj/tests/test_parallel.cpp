#include <atomic>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "lifespan/parallel.hpp"

using namespace lifespan;

namespace {

/// Restores the configured thread count on scope exit so suites don't leak
/// configuration into each other.
struct ThreadGuard {
    int saved = par::thread_count();
    ~ThreadGuard() { par::set_thread_count(saved); }
};

}  // namespace

TEST_SUITE("parallel") {

TEST_CASE("thread count plumbing") {
    ThreadGuard guard;
    CHECK(par::hardware_threads() >= 1);
    par::set_thread_count(3);
    CHECK(par::thread_count() == 3);
    par::set_thread_count(1);
    CHECK(par::thread_count() == 1);
    par::set_thread_count(0);  // runtime default
    CHECK(par::thread_count() >= 1);
}

TEST_CASE("parallel_for covers every index exactly once") {
    ThreadGuard guard;
    const std::size_t n = 10'000;
    for (int jobs : {1, 0}) {
        par::set_thread_count(jobs);
        std::vector<std::atomic<int>> hits(n);
        par::parallel_for(n, [&](std::size_t i) { hits[i].fetch_add(1); });
        for (std::size_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
    }
}

TEST_CASE("blocked_sum is bitwise identical across thread counts") {
    ThreadGuard guard;
    // Mixed magnitudes and signs; naive reduction order would differ.
    const std::size_t n = 1 << 18;
    auto term = [](std::size_t i) {
        const double x = 1e-3 * static_cast<double>(i % 9973) - 4.9;
        return std::sin(x) * std::exp(0.03 * x) + 1e12 * ((i % 1024) == 0 ? 1.0 : 0.0);
    };
    par::set_thread_count(1);
    const double serial = par::blocked_sum(n, term);
    par::set_thread_count(0);
    const double parallel = par::blocked_sum(n, term);
    CHECK(serial == parallel);  // bitwise, not approximate
}

TEST_CASE("blocked_sum small-n and empty edges") {
    CHECK(par::blocked_sum(0, [](std::size_t) { return 1.0; }) == 0.0);
    CHECK(par::blocked_sum(5, [](std::size_t i) { return double(i); }) == 10.0);
}

}  // TEST_SUITE
