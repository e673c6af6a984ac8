#pragma once

#include <span>
#include <vector>

#include "lifespan/profiles.hpp"
#include "lifespan/quadrature.hpp"

namespace lifespan {

/// (4 pi t)^{-d/2} exp(-|z|^2 / 4t) with d = z.size(); t > 0 required.
double gauss_kernel(std::span<const double> z, double t);

/// One-dimensional Gauss kernel at separation z.
double gauss_kernel_1d(double z, double t);

struct KernelQuery {
    std::vector<double> x;  // point in the closed half-space, x.back() >= 0
    std::vector<double> y;
    double t = 0.0;
    int N = 1;
};

/// Heat kernel of the half-space with zero Neumann boundary data: the
/// tangential Gauss factor times the even reflection in the normal direction,
///   gauss_{N-1}(x'-y', t) * [gauss_1(x_N-y_N, t) + gauss_1(x_N+y_N, t)].
double neumann_green(const KernelQuery& q);

/// Free (linear) evolution of kappa * psi at (x, t):
///   F(x, t) = int_D G(x, y, t) kappa psi(y) dy.
/// Closed forms for Constant and GaussianGrowth; quadrature for the radial
/// kinds is implemented for N = 1 only (InapplicableError otherwise).
/// GaussianGrowth exists only for t < 1/(4 lambda): beyond that the linear
/// evolution itself blows up (LinearBlowupError).
double free_propagate(const InitialProfile& profile, double kappa,
                      std::span<const double> x, double t, int N,
                      const quad::Tolerance& tol = {});

}  // namespace lifespan
