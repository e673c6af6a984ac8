#include "lifespan/kernel.hpp"

#include <cmath>

#include "lifespan/errors.hpp"

namespace lifespan {

namespace {

/// Kernel support cutoff: exp(-13.4^2/4) ~ 3e-20, below double noise here.
constexpr double kKernelReach = 13.4;

double log_e_plus_exp(double L) {
    return L + std::log1p(std::exp(1.0 - L));
}

}  // namespace

double gauss_kernel(std::span<const double> z, double t) {
    if (!(t > 0.0)) throw DomainError("gauss_kernel: t must be > 0");
    double s = 0.0;
    for (double zi : z) s += zi * zi;
    const double d = static_cast<double>(z.size());
    return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-s / (4.0 * t));
}

double gauss_kernel_1d(double z, double t) {
    if (!(t > 0.0)) throw DomainError("gauss_kernel: t must be > 0");
    return std::exp(-z * z / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
}

double neumann_green(const KernelQuery& q) {
    if (q.N < 1) throw DomainError("neumann_green: N must be >= 1");
    if (q.x.size() != static_cast<std::size_t>(q.N) ||
        q.y.size() != static_cast<std::size_t>(q.N))
        throw DomainError("neumann_green: point dimension must match N");
    if (!(q.t > 0.0)) throw DomainError("neumann_green: t must be > 0");
    if (q.x.back() < 0.0 || q.y.back() < 0.0)
        throw DomainError("neumann_green: points must lie in the closed half-space");

    double tangential = 1.0;
    if (q.N > 1) {
        double s = 0.0;
        for (int i = 0; i < q.N - 1; ++i) {
            const double d = q.x[i] - q.y[i];
            s += d * d;
        }
        tangential = std::pow(4.0 * M_PI * q.t, -0.5 * (q.N - 1)) * std::exp(-s / (4.0 * q.t));
    }
    const double xn = q.x.back(), yn = q.y.back();
    return tangential * (gauss_kernel_1d(xn - yn, q.t) + gauss_kernel_1d(xn + yn, q.t));
}

double free_propagate(const InitialProfile& profile, double kappa,
                      std::span<const double> x, double t, int N,
                      const quad::Tolerance& tol) {
    if (N < 1) throw DomainError("free_propagate: N must be >= 1");
    if (!(kappa > 0.0)) throw DomainError("free_propagate: kappa must be > 0");
    if (x.size() != static_cast<std::size_t>(N))
        throw DomainError("free_propagate: point dimension must match N");
    if (t < 0.0) throw DomainError("free_propagate: t must be >= 0");
    const double xn = x.back();
    if (xn < 0.0) throw DomainError("free_propagate: x_N must be >= 0");

    if (t == 0.0) return kappa * eval_profile(profile, x);

    switch (profile.kind) {
        case ProfileKind::Constant:
            // The reflected kernel conserves mass, so constants are fixed points.
            return kappa * profile.c;
        case ProfileKind::GaussianGrowth: {
            const double t_blow = 1.0 / (4.0 * profile.lambda);
            if (t >= t_blow)
                throw LinearBlowupError("free evolution of gaussian-growth data ends", t_blow);
            const double shrink = 1.0 - 4.0 * profile.lambda * t;
            return kappa * std::exp(profile.lambda * xn * xn / shrink) / std::sqrt(shrink);
        }
        default:
            break;
    }

    if (N != 1)
        throw InapplicableError("free_propagate: radial profiles are propagated for N = 1 only");

    const double reach = kKernelReach * std::sqrt(t);
    const double supp = support_radius(profile);
    const double y_lo = std::max(0.0, xn - reach);
    double y_hi = xn + reach;
    if (std::isfinite(supp)) y_hi = std::min(y_hi, supp);
    if (y_hi <= y_lo) return 0.0;

    auto ker = [xn, t](double y) {
        return gauss_kernel_1d(xn - y, t) + gauss_kernel_1d(xn + y, t);
    };
    auto h = [&](double y) { return ker(y) * kappa * eval_radial(profile, y); };

    std::vector<double> cuts;
    if (std::isfinite(supp) && supp > y_lo && supp < y_hi) cuts.push_back(supp);

    const bool singular_head =
        profile.kind == ProfileKind::SingularLog && (profile.A > 0.0 || profile.B < 0.0);
    if (y_lo == 0.0 && singular_head) {
        const double A = profile.A, B = profile.B, k = kappa;
        quad::SingularIntegrand si;
        si.h = h;
        si.h_log = [ker, A, B, k](double L) {
            const double lL = log_e_plus_exp(L);
            return ker(std::exp(-L)) * k * std::exp((A - 1.0) * L) * std::pow(lL, -B);
        };
        si.s = 1.0 - A;
        si.q = B;
        return quad::integrate_singular(si, y_hi, tol, cuts);
    }
    return quad::integrate_pieces(h, y_lo, y_hi, cuts, tol);
}

}  // namespace lifespan
