#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lifespan/conditions.hpp"
#include "lifespan/predictor.hpp"
#include "lifespan/volterra.hpp"

namespace lifespan {

enum class SweepSource { Volterra, UpperBound, LowerBound };

std::string format_source(SweepSource s);
SweepSource parse_source(const std::string& text);

struct SweepPoint {
    double kappa = 0.0;
    double T_hat = 0.0;
    SweepSource source = SweepSource::Volterra;
    bool ok = false;
    std::string reason;  // why the point was dropped, when !ok
};

enum class SweepVerdict { Match, Mismatch, Inconclusive };

struct FitResult {
    double exponent = 0.0;
    double stderr_ = 0.0;
    double r_squared = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    ScalingLaw predicted;
    double fitted_exponent = 0.0;
    double fit_stderr = 0.0;
    double r_squared = 0.0;
    SweepVerdict verdict = SweepVerdict::Inconclusive;
    double tolerance = 0.0;  // |fitted - predicted| band actually applied
};

struct SweepConfig {
    StepPolicy step;             // volterra source
    GammaConfig gammas;          // bound sources
    double match_rel_tol = 0.1;  // band = max(rel_tol * |e|, abs_tol)
    double match_abs_tol = 0.05;
    double min_r_squared = 0.98;
    double finite_limit_rtol = 0.05;
    int jobs = 0;  // 0 = configured default

    /// Overrides the predicted law (used when predict() does not cover the
    /// profile/regime pair but the expected slope is known).
    std::optional<ScalingLaw> expected_override;
};

/// Geometric kappa grid with `count` points spanning [lo, hi].
std::vector<double> geometric_kappas(double lo, double hi, int count);

/// Least squares in the law's natural coordinates; see the fit coordinate
/// table in the implementation.  Points must all be ok with T_hat > 0.
FitResult fit_law(const std::vector<SweepPoint>& points, const ScalingLaw& law);

/// Computes T_hat(kappa) per point via the chosen source (volterra points run
/// in parallel, merged by index), fits against the predicted law, and fills
/// the verdict.  Points that fail to produce an estimate are kept with
/// ok=false and a reason; fewer than 4 usable points => Inconclusive.
SweepResult run_sweep(const ProblemSpec& base, const std::vector<double>& kappas,
                      SweepSource source, Regime regime, const SweepConfig& cfg = {});

}  // namespace lifespan
