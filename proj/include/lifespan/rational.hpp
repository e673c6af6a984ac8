#pragma once

#include <cmath>
#include <string>

#include "lifespan/errors.hpp"

namespace lifespan {

/// Nonlinearity exponent p > 1. Keeps an exact rational form when the input
/// was supplied as one ("2", "3/2", "1+1/N"), so that the boundary case
/// p = p_* = 1 + 1/N can be dispatched exactly; floating inputs fall back to a
/// relative tolerance of 1e-12.
struct Exponent {
    double value = 0.0;
    long long num = 0;  // num/den when den != 0
    long long den = 0;

    static Exponent from_double(double p);
    static Exponent from_rational(long long num, long long den);

    /// Accepts "2", "1.5", "3/2" and the symbolic critical form "1+1/N".
    static Exponent parse(const std::string& text, int N);

    bool has_rational() const { return den != 0; }

    /// p == 1 + 1/N, exactly for rational input, else within 1e-12 relative.
    bool is_critical(int N) const;
    bool is_subcritical(int N) const { return !is_critical(N) && value < 1.0 + 1.0 / N; }
    bool is_supercritical(int N) const { return !is_critical(N) && value > 1.0 + 1.0 / N; }

    /// 1/(p-1), from the rational form when available.
    double inv_p_minus_1() const;
};

/// |a - b| <= 1e-12 * max(1, |a|, |b|); the comparison used for case-table
/// boundaries on floating inputs.
bool near_equal(double a, double b);

}  // namespace lifespan
