#pragma once

// Brute-force reference for the N = 1 boundary Volterra equation with
// constant data,
//   w(t) = kappa + pi^{-1/2} int_0^t (t-s)^{-1/2} w(s)^p ds,
// discretized on a uniform grid with piecewise-constant w^p taken at the
// left endpoint and the kernel moment integrated exactly per segment.
// Deliberately different from the library scheme (piecewise-linear, adaptive,
// implicit): first-order accurate, O(n^2), good enough to cross-check a
// marched trace at a pre-blow-up time.

#include <cmath>
#include <vector>

namespace refvolt {

inline std::vector<double> rectangle_trace(double p, double kappa, double t_end, int n) {
    const double h = t_end / n;
    const double c = 2.0 / std::sqrt(M_PI);  // int (t-s)^{-1/2} antiderivative factor
    std::vector<double> w(n + 1), v(n + 1);
    w[0] = kappa;
    v[0] = std::pow(kappa, p);
    for (int j = 1; j <= n; ++j) {
        const double tj = j * h;
        double sum = 0.0;
        for (int k = 0; k < j; ++k)
            sum += v[k] * (std::sqrt(tj - k * h) - std::sqrt(tj - (k + 1) * h));
        w[j] = kappa + c * sum;
        v[j] = std::pow(w[j], p);
    }
    return w;
}

/// Fixed-point (Picard) solution of the same discretization; agreement with
/// the marched recursion validates the oracle's own arithmetic.
inline std::vector<double> picard_trace(double p, double kappa, double t_end, int n,
                                        int max_iters = 400) {
    const double h = t_end / n;
    const double c = 2.0 / std::sqrt(M_PI);
    std::vector<double> w(n + 1, kappa), next(n + 1), v(n + 1);
    for (int it = 0; it < max_iters; ++it) {
        for (int j = 0; j <= n; ++j) v[j] = std::pow(w[j], p);
        double change = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double tj = j * h;
            double sum = 0.0;
            for (int k = 0; k < j; ++k)
                sum += v[k] * (std::sqrt(tj - k * h) - std::sqrt(tj - (k + 1) * h));
            next[j] = kappa + c * sum;
            change = std::max(change, std::abs(next[j] - w[j]) / next[j]);
        }
        w.swap(next);
        if (change < 1e-14) break;
    }
    return w;
}

}  // namespace refvolt
