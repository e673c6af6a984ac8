#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lifespan/problem.hpp"
#include "lifespan/quadrature.hpp"

namespace lifespan {

/// Constants and discretization knobs for the integral conditions.
struct GammaConfig {
    double gamma1 = 1.0;   // necessary, general p
    double gamma1p = 1.0;  // necessary, critical p
    double gamma2 = 1.0;   // sufficient, subcritical
    double gamma3 = 1.0;   // sufficient, split (both parts)
    double gamma4 = 1.0;   // sufficient, critical (both parts)
    double delta = 0.5;    // in (0, 1)
    double a = 0.0;        // split exponent; 0 = auto
    int sigma_per_decade = 64;
    double sigma_span = 1e-8;  // sigma grid covers [span * sqrt(T), sqrt(T)]
    int sigma_grid_size = 0;   // > 0: exact geometric grid of this size instead
    double t_lo = 1e-12;       // bound searches scan this T range
    double t_hi = 1e12;
    double bisect_rtol = 1e-3;
    quad::Tolerance quad_tol{1e-9, 1e-7};

    void validate() const;
    /// Explicit a, or min((1+p)/2, (N/A)(1 - 1e-6)) for SingularLog with A > 0,
    /// else (1+p)/2; InapplicableError when no a in (1, p) keeps psi^a local.
    double resolve_a(const ProblemSpec& prob) const;
};

struct ConditionVerdict {
    bool holds = false;
    std::string name;          // which condition was evaluated
    double worst_sigma = 0.0;  // sigma attaining the margin
    double margin = 0.0;       // max over the grid of log(LHS/RHS); holds iff <= 0
};

enum class BoundKind { Zero, Value, UnboundedOnGrid };

struct LifespanBound {
    BoundKind kind = BoundKind::Value;
    double T = 0.0;  // meaningful for kind == Value
};

/// Evaluates the integral conditions for one (N, p, psi, gammas) instance.
/// kappa enters every left-hand side linearly (except the Orlicz part), so it
/// is a per-call argument and the sigma-indexed suprema are cached across
/// calls; a full kappa sweep costs one grid fill.
class ConditionEvaluator {
  public:
    ConditionEvaluator(ProblemSpec prob, GammaConfig g);

    // Individual conditions at existence time T (wrong-regime calls throw).
    ConditionVerdict necessary_general(double kappa, double T);
    ConditionVerdict necessary_critical(double kappa, double T);      // p == p_* only
    ConditionVerdict sufficient_subcritical(double kappa, double T);  // 1 < p < p_* only
    ConditionVerdict sufficient_split(double kappa, double T);        // any p > 1
    ConditionVerdict sufficient_critical(double kappa, double T);     // p == p_* only

    // Regime dispatch: the sharpest applicable condition for this p.
    ConditionVerdict necessary(double kappa, double T);
    ConditionVerdict sufficient(double kappa, double T);

    /// Largest T in [t_lo, t_hi] where the necessary condition holds; the
    /// holding set is an interval, so log-bisection applies.  Zero when it
    /// fails already at t_lo, UnboundedOnGrid when it holds at t_hi.
    LifespanBound upper_bound(double kappa);

    /// Largest T in [t_lo, t_hi] where the applicable sufficient condition
    /// holds: descending geometric scan to the first hold, then bisection
    /// against the smallest failing scan point.
    LifespanBound lower_bound(double kappa);

    const ProblemSpec& problem() const { return prob_; }
    const GammaConfig& config() const { return g_; }

  private:
    struct CachedSup {
        double value;
        double argmax;
        bool unbounded;
    };
    struct GridPoint {
        double sigma;
        std::optional<long> k;  // lattice index when snapped
    };

    double sigma_at(long k) const;  // 10^{k / sigma_per_decade}
    std::vector<GridPoint> sigma_grid(double T) const;

    CachedSup necessary_sup(double sigma);  // sup_x weight * mass, kappa = 1
    CachedSup split_avg_sup(double sigma);  // slab-free sup_x of avg(psi^a)
    double necessary_sup_lattice(long k);
    const CachedSup& split_avg_sup_lattice(long k);
    void prefill_necessary(const std::vector<GridPoint>& grid);

    double split_part2_sup(double sigma, double rootT);  // slab-aware avg sup
    ConditionVerdict far_field_part(double kappa, double T, double x_lo, double gamma,
                                    const char* name);
    double split_a();

    ProblemSpec prob_;
    GammaConfig g_;

    std::mutex mu_;
    std::map<long, double> nec_cache_;       // lattice index -> sup (kappa = 1)
    std::map<long, CachedSup> split_cache_;  // lattice index -> slab-free sup
    std::optional<double> a_;                // resolved lazily (may be inapplicable)
};

// One-shot wrappers; sigma_grid_size > 0 overrides the lattice with an exact
// geometric grid of that many points on [sigma_span * sqrt(T), sqrt(T)].
ConditionVerdict necessary_general(const ProblemSpec&, double T, const GammaConfig& = {},
                                   int sigma_grid_size = 0);
ConditionVerdict necessary_critical(const ProblemSpec&, double T, const GammaConfig& = {},
                                    int sigma_grid_size = 0);
ConditionVerdict sufficient_subcritical(const ProblemSpec&, double T, const GammaConfig& = {},
                                        int sigma_grid_size = 0);
ConditionVerdict sufficient_split(const ProblemSpec&, double T, const GammaConfig& = {},
                                  int sigma_grid_size = 0);
ConditionVerdict sufficient_critical(const ProblemSpec&, double T, const GammaConfig& = {},
                                     int sigma_grid_size = 0);
LifespanBound upper_bound_lifespan(const ProblemSpec&, const GammaConfig& = {});
LifespanBound lower_bound_lifespan(const ProblemSpec&, const GammaConfig& = {});

}  // namespace lifespan
