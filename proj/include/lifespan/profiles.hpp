#pragma once

#include <limits>
#include <span>
#include <string>

#include "lifespan/errors.hpp"

namespace lifespan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Initial data families for the half-space problem. All are nonnegative on
/// D = { x : x_N >= 0 }.
///
///   SingularLog(A, B):  |x|^{-A} [log(e + 1/|x|)]^{-B} restricted to |x| < 1
///   PowerDecay(A):      (1 + |x|)^{-A}
///   GaussianGrowth(l):  exp(l * x_N^2)
///   Constant(c):        c
enum class ProfileKind { SingularLog, PowerDecay, GaussianGrowth, Constant };

struct InitialProfile {
    ProfileKind kind = ProfileKind::Constant;
    double A = 0.0;       // SingularLog / PowerDecay
    double B = 0.0;       // SingularLog
    double lambda = 0.0;  // GaussianGrowth
    double c = 1.0;       // Constant

    static InitialProfile singular_log(double A, double B);
    static InitialProfile power_decay(double A);
    static InitialProfile gaussian_growth(double lambda);
    static InitialProfile constant(double c);
};

/// Integrability at the origin, per the local-mass criterion: false exactly
/// when the profile fails to be locally integrable with enough room for the
/// case tables (SingularLog needs (A=0, B>0) or 0<A<N or (A=N, B>1)).
/// Profiles without a singularity are always admissible.
bool admissible(const InitialProfile& profile, int N);

/// Pointwise value at x in R^N (last coordinate is x_N >= 0).
/// Returns +inf at the origin when the profile is unbounded there.
double eval_profile(const InitialProfile& profile, std::span<const double> x);

/// Value as a function of r = |x| for radially defined kinds
/// (SingularLog, PowerDecay, Constant). Throws DomainError for GaussianGrowth.
double eval_radial(const InitialProfile& profile, double r);

bool is_radial(const InitialProfile& profile);

/// Radius beyond which the profile vanishes (+inf if it never does).
double support_radius(const InitialProfile& profile);

/// Limit of psi(x) as x -> 0 within D; +inf for SingularLog with A > 0.
double boundary_value(const InitialProfile& profile);

/// psi(r) ~ scale * r^{-mu} [log(e+1/r)]^{-nu} as r -> 0 (exact for
/// SingularLog; mu = nu = 0 for bounded kinds).
struct OriginExponents {
    double mu = 0.0;
    double nu = 0.0;
};
OriginExponents origin_exponents(const InitialProfile& profile);

/// mass of kappa*psi over B_+(0, sigma) = (1/2) N V_N int_0^min(sigma, R_supp)
/// psi(r) r^{N-1} dr for radial kinds; the GaussianGrowth case integrates the
/// axial weight over the half-ball. May legitimately return +inf.
double half_ball_mass(const InitialProfile& profile, double sigma, int N);

/// Grammar: singular-log:A=<v>,B=<v> | power-decay:A=<v> |
///          gaussian-growth:lambda=<v> | constant:c=<v>
InitialProfile parse_profile(const std::string& text);
std::string format_profile(const InitialProfile& profile);

// --- Orlicz pair and the power-log comparison function ---------------------

/// Phi(s) = s [log(e + s)]^N on s >= 0 (strictly increasing).
double phi_orlicz(double s, int N);

/// rho(s) = s^{-N} [log(e + 1/s)]^{-N} on s > 0.
double rho(double s, int N);

/// Inverse of Phi on [0, inf), to 1e-12 relative accuracy.
double phi_inverse(double tau, int N);

/// Psi(tau) = tau^{a1} [log(e + 1/tau)]^{a2} with a1 > 0.
struct PowerLogSpec {
    double a1 = 1.0;
    double a2 = 0.0;
};

double psi_power_log(double tau, const PowerLogSpec& spec);

/// Largest tau1 such that Psi is increasing on (0, tau1]; +inf when Psi is
/// increasing everywhere (the derivative sign a1*log(e+1/tau)*(1+e*tau) - a2
/// never goes negative, which requires roughly a2/a1 > 3.15).
double psi_monotone_end(const PowerLogSpec& spec);

/// Inverts Psi on its increasing branch near 0; DomainError when the target
/// exceeds Psi(tau1).
double psi_inverse(double target, const PowerLogSpec& spec);

}  // namespace lifespan
