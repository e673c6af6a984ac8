#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lifespan/errors.hpp"
#include "lifespan/profiles.hpp"

namespace lifespan::quad {

/// A result is accepted once the error estimate fits within
/// max(abs_tol, rel_tol * |value|); the weaker of the two wins.
struct Tolerance {
    double abs_tol = 1e-7;
    double rel_tol = 1e-5;
};

struct GLRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

/// n-point Gauss-Legendre rule; nodes/weights computed once per order by
/// Newton iteration on the Legendre recurrence and cached.
const GLRule& gauss_legendre(int n);

double gl_panel(const std::function<double(double)>& f, double a, double b,
                const GLRule& rule);

/// Globally adaptive bisection with a GL7/GL15 error estimate per panel.
/// Throws AccuracyError (carrying the achieved tolerance) on non-convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol, int max_depth = 52);

/// Piecewise integration with the interior breakpoints inserted (sorted and
/// clipped to [a, b]); each piece gets the full tolerance scaled by length.
double integrate_pieces(const std::function<double(double)>& f, double a, double b,
                        std::span<const double> breaks, const Tolerance& tol);

/// Integrand on (0, b] that may blow up integrably at 0.  h is the full
/// integrand (measure factors folded in).  h_log(L) = h(e^{-L}) * e^{-L} must
/// be written so the deep region evaluates without underflow or overflow
/// (everything expressed through L and log(e + e^L)).  Asymptotically
/// h_log(L) ~ C e^{-s L} L^{-q}; the integral over (0, b] diverges iff s < 0,
/// or s == 0 with q <= 1.
struct SingularIntegrand {
    std::function<double(double)> h;
    std::function<double(double)> h_log;
    double s = 1.0;
    double q = 0.0;
};

bool head_divergent(double s, double q);

/// Integral of h over (0, b]: returns +inf when the head diverges, otherwise
/// log-graded panels on [b e^{-U}, b] plus a panel ladder in L = log(1/r) for
/// the rest.  `breaks` marks interior kinks (window edges, kernel peaks).
double integrate_singular(const SingularIntegrand& f, double b, const Tolerance& tol,
                          std::span<const double> breaks = {});

// --- Half-ball integrals over B_+(x, sigma), centers on the x_N-axis --------

/// Integrand factored as R(|y|) * V(y_N) over B_+((0,..,0,center), sigma):
///
///   PlainPower: (kappa * psi(y))^power * exp(-gauss_lambda * y_N^2)
///   Orlicz:     Phi(orlicz_scale * psi(y)) with Phi(s) = s [log(e+s)]^N
///
/// both optionally restricted to the slab  slab_above <= y_N < slab_below.
/// Evaluated by the polar reduction around the origin
///   S_{N-2} int r^{N-1} R(r) [ int_{theta window} V(r cos t) sin^{N-2} t dt ] dr
/// so the origin singularity is one-dimensional regardless of N.
enum class IntegrandKind { PlainPower, Orlicz };

struct BallQuery {
    InitialProfile profile;
    int N = 1;
    double kappa = 1.0;
    double sigma = 1.0;
    IntegrandKind kind = IntegrandKind::PlainPower;
    double power = 1.0;        // PlainPower exponent a
    double gauss_lambda = 0.0; // 0 = no weight
    double orlicz_scale = 1.0;
    double slab_below = kInf;
    double slab_above = 0.0;
    Tolerance tol{1e-9, 1e-7};
};

/// |B_+(x, sigma)| for a center at height d = x_N >= 0 (full ball volume minus
/// the spherical cap below the boundary).
double half_ball_measure(double d, double sigma, int N);

/// May return +inf (divergent singular head inside the region).
double ball_integral(const BallQuery& q, double center);

/// ball_integral / half_ball_measure (the slab cutoffs do not shrink the
/// denominator).
double ball_average(const BallQuery& q, double center);

// --- Maximization along the x_N-axis ---------------------------------------

struct AxisSearchPolicy {
    double extent = 0.0;      // 0 = auto from sigma and the support hint
    int golden_iters = 40;
    double growth_factor = 8.0;  // unbounded when the ladder still grows this much
};

struct SupResult {
    double value = 0.0;
    double argmax = 0.0;
    bool unbounded = false;  // f kept increasing along the ladder
};

/// Maximizes f over centers x_N in [lo, hi]: evaluates lo and a geometric
/// ladder of offsets up to the extent, then refines around the best point by
/// golden section.  When the top of an unbounded ladder is still strictly
/// increasing and dominates f(lo), reports unbounded instead of a value.
SupResult maximize_on_axis(const std::function<double(double)>& f, double sigma,
                           double support_hint, const AxisSearchPolicy& policy = {},
                           double lo = 0.0, double hi = kInf);

/// sup over centers of ball_average; support hint taken from the profile.
SupResult sup_average_over_centers(const BallQuery& q, const AxisSearchPolicy& policy = {});

}  // namespace lifespan::quad
