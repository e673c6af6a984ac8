#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "lifespan/parallel.hpp"
#include "lifespan/profiles.hpp"
#include "lifespan/quadrature.hpp"

namespace {

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

/// Duhamel-style history reduction: the volterra marcher's inner loop.
double history_sum(std::size_t n, double target) {
    return lifespan::par::blocked_sum(n, [&](std::size_t k) {
        const double a = target * k / (n + 1.0), b = target * (k + 1) / (n + 1.0);
        const double alpha = std::sqrt(target - a), beta = std::sqrt(target - b);
        const double diff = (b - a) / (alpha + beta);
        return 2.0 * diff + diff * (2.0 * (target - a) - alpha * beta - (target - b)) / 3.0;
    });
}

/// Condition-lattice fill: independent singular ball masses per sigma.
std::vector<double> lattice_fill(int count) {
    const lifespan::InitialProfile psi = lifespan::InitialProfile::singular_log(0.5, 1.0);
    std::vector<double> out(count);
    lifespan::par::parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
        lifespan::quad::BallQuery q;
        q.profile = psi;
        q.N = 1;
        q.sigma = std::pow(10.0, -4.0 + 4.0 * (double(i) / count));
        q.kind = lifespan::quad::IntegrandKind::PlainPower;
        q.power = 1.0;
        out[i] = lifespan::quad::ball_integral(q, 0.3 * q.sigma);
    });
    return out;
}

}  // namespace

int main() {
    namespace par = lifespan::par;
    std::printf("openmp: %s, hardware threads: %d\n\n",
                par::openmp_enabled() ? "enabled" : "disabled", par::hardware_threads());

    constexpr std::size_t kHistoryTerms = 1 << 22;
    constexpr int kLatticePoints = 192;
    constexpr int kReps = 5;

    par::set_thread_count(1);
    auto t0 = clk::now();
    double serial_sum = 0.0;
    for (int r = 0; r < kReps; ++r) serial_sum = history_sum(kHistoryTerms, 1.0 + r * 1e-9);
    const double serial_hist = seconds_since(t0) / kReps;
    t0 = clk::now();
    const std::vector<double> serial_lat = lattice_fill(kLatticePoints);
    const double serial_fill = seconds_since(t0);

    par::set_thread_count(0);  // runtime default: all cores
    t0 = clk::now();
    double parallel_sum = 0.0;
    for (int r = 0; r < kReps; ++r) parallel_sum = history_sum(kHistoryTerms, 1.0 + r * 1e-9);
    const double parallel_hist = seconds_since(t0) / kReps;
    t0 = clk::now();
    const std::vector<double> parallel_lat = lattice_fill(kLatticePoints);
    const double parallel_fill = seconds_since(t0);

    bool identical = serial_sum == parallel_sum;
    for (int i = 0; i < kLatticePoints; ++i)
        identical = identical && serial_lat[i] == parallel_lat[i];

    std::printf("history reduction (%zu terms):\n", kHistoryTerms);
    std::printf("  serial   %.3f ms\n", serial_hist * 1e3);
    std::printf("  parallel %.3f ms   speedup %.2fx\n\n", parallel_hist * 1e3,
                serial_hist / parallel_hist);
    std::printf("lattice fill (%d singular ball masses):\n", kLatticePoints);
    std::printf("  serial   %.3f ms\n", serial_fill * 1e3);
    std::printf("  parallel %.3f ms   speedup %.2fx\n\n", parallel_fill * 1e3,
                serial_fill / parallel_fill);
    std::printf("bitwise identical results: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
