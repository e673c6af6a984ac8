#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lifespan/problem.hpp"
#include "lifespan/quadrature.hpp"

namespace lifespan {

/// Controls for the boundary-trace marcher (N = 1).
struct StepPolicy {
    double max_rel_step = 0.05;  // accepted relative increment of w per step
    double dt_cap_frac = 0.25;   // dt <= frac * t while growing through decades
    double growth_cap = 1.4;     // max dt increase factor per step
    double t_start = 0.0;        // 0 = auto (singular data starts on a head grid)
    double head_span = 1e-6;     // singular head covers (0, head_span * first node]
    double blowup_threshold = 1e6;
    double bracket_factor = 4.0;  // second threshold at factor * blowup_threshold
    int rate_fit_window = 32;     // accepted steps entering the rate fit
    double horizon = 1e6;         // give up (grid-exhausted) beyond this time
    double checkpoint_rtol = 1e-4;  // refinement stops when traces agree to this
    int max_refinements = 4;
    std::size_t max_steps = 2'000'000;
    quad::Tolerance quad_tol{1e-9, 1e-7};
};

/// Accepted grid of the minimal-solution boundary trace w(t) = u(0, t).
struct TraceSolution {
    std::vector<double> t;
    std::vector<double> w;
    bool blew_up = false;       // threshold crossed within the horizon
    bool head_truncated = false;  // singular head was cut at the resolvable depth
    int refinements = 0;
    std::string stop_reason;    // "threshold", "horizon", "dt-underflow", "linear-blowup"
};

enum class BlowupMethod { ThresholdRateFit, GridExhausted };

struct BlowupEstimate {
    std::optional<double> T_est;  // empty for GridExhausted
    double T_lo = 0.0;            // bracket, T_lo < T_est < T_hi when present
    double T_hi = 0.0;
    BlowupMethod method = BlowupMethod::GridExhausted;
    std::size_t steps = 0;
    int refinements = 0;
    std::string detail;
};

/// Boundary trace of the minimal solution for N = 1:
///   w(t) = F(t) + pi^{-1/2} int_0^t (t-s)^{-1/2} w(s)^p ds,
/// marched by product integration (piecewise-linear w^p, exact kernel
/// moments); each step solves its scalar implicit equation for the smaller
/// root.  Stops at the extended threshold, the horizon, or when the step size
/// underflows against a singularity of F.
TraceSolution solve_boundary_trace(const ProblemSpec& prob, const StepPolicy& policy = {});

/// Life-span estimate: marches under successive refinement until checkpoint
/// traces agree, then extrapolates the blow-up time from the fitted rate
/// w ~ C (T-t)^{-1/(2(p-1))} near the threshold crossings.
BlowupEstimate estimate_blowup_time(const ProblemSpec& prob, const StepPolicy& policy = {});

}  // namespace lifespan
