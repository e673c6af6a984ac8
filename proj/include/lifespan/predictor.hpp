#pragma once

#include <optional>
#include <string>

#include "lifespan/problem.hpp"

namespace lifespan {

enum class Regime { LargeKappa, SmallKappa };

/// Asymptotic life-span law in the given regime, up to two-sided constants.
enum class LawVariant {
    PowerLaw,          // T ≍ kappa^e
    PowerLogLaw,       // T ≍ [kappa (log kappa)^{-q}]^{e}
    LogLifespanLarge,  // |log T| ≍ kappa^{r}     (kappa -> inf)
    LogLifespanSmall,  // log T  ≍ kappa^{-r}     (kappa -> 0)
    PowerOverLogSmall, // T ≍ (kappa^{-1} / log kappa^{-1})^{e}
    FiniteLimit,       // T -> value              (kappa -> 0)
    NoLocalSolutionAllKappa,
    NoLocalSolutionLargeKappa,
    GlobalForSmallKappa,
};

struct ScalingLaw {
    LawVariant variant = LawVariant::PowerLaw;
    double e = 0.0;      // PowerLaw / PowerLogLaw / PowerOverLogSmall
    double q = 0.0;      // PowerLogLaw log power
    double r = 0.0;      // LogLifespan variants
    double value = 0.0;  // FiniteLimit

    static ScalingLaw power(double e);
    static ScalingLaw power_log(double e, double q);  // q == 0 collapses to power
    static ScalingLaw loglife_large(double r);
    static ScalingLaw loglife_small(double r);
    static ScalingLaw power_over_log(double e);
    static ScalingLaw finite_limit(double value);
    static ScalingLaw no_local_all();
    static ScalingLaw no_local_large();
    static ScalingLaw global_small();

    bool operator==(const ScalingLaw&) const = default;
};

/// Asymptotic life-span law, covering three data/regime pairs:
///   (SingularLog, LargeKappa), (PowerDecay, SmallKappa),
///   (GaussianGrowth, SmallKappa).
/// Other pairs throw InapplicableError; inadmissible SingularLog data throw
/// DomainError.  Boundary dispatch (p = p_*, A = N, A = 1/(p-1), B = N+1) is
/// exact for rational p and within 1e-12 otherwise.
ScalingLaw predict(int N, const Exponent& p, const InitialProfile& profile, Regime regime);

/// The slope a sweep fit should reproduce; empty for variants without one.
std::optional<double> exponent_of(const ScalingLaw& law);

/// power:e=<v> | power-log:e=<v>,q=<v> | loglife-large:r=<v> |
/// loglife-small:r=<v> | power-over-log:e=<v> | finite-limit:T=<v> |
/// no-local:all | no-local:large-kappa | global:small-kappa
std::string format_law(const ScalingLaw& law);
ScalingLaw parse_law(const std::string& text);

Regime parse_regime(const std::string& text);  // "large-kappa" | "small-kappa"
std::string format_regime(Regime regime);

}  // namespace lifespan
