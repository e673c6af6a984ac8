#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "lifespan/errors.hpp"
#include "lifespan/kernel.hpp"

using namespace lifespan;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

double green1(double x, double y, double t) {
    KernelQuery q;
    q.x = {x};
    q.y = {y};
    q.t = t;
    q.N = 1;
    return neumann_green(q);
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("gauss kernel closed forms and domain checks") {
    CHECK(gauss_kernel_1d(0.0, 0.25) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-14));
    const double z[] = {0.7, -1.3};
    CHECK(gauss_kernel(z, 0.4) ==
          doctest::Approx(gauss_kernel_1d(0.7, 0.4) * gauss_kernel_1d(-1.3, 0.4)).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_kernel_1d(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(gauss_kernel(z, -1.0), DomainError);
}

TEST_CASE("reflected kernel conserves mass") {
    for (const auto& [x, t] : {std::pair{0.0, 1.0}, {0.3, 0.07}, {2.5, 0.5}}) {
        const double hi = x + 14.0 * std::sqrt(t);
        const double mass =
            simpson([&](double y) { return green1(x, y, t); }, 0.0, hi, 20000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }

    // N = 2: tangential window, normal half-line
    KernelQuery q;
    q.N = 2;
    q.x = {0.4, 0.9};
    q.t = 0.2;
    const double r = 14.0 * std::sqrt(q.t);
    const double mass2 = simpson(
        [&](double y1) {
            return simpson(
                [&](double y2) {
                    q.y = {y1, y2};
                    return neumann_green(q);
                },
                0.0, q.x[1] + r, 1600);
        },
        q.x[0] - r, q.x[0] + r, 1600);
    CHECK(mass2 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("green function is symmetric in its arguments") {
    KernelQuery a, b;
    a.N = b.N = 3;
    a.t = b.t = 0.37;
    a.x = {0.3, -1.2, 0.5};
    a.y = {-0.7, 2.0, 1.3};
    b.x = a.y;
    b.y = a.x;
    CHECK(neumann_green(a) == neumann_green(b));

    a.N = b.N = 1;
    a.x = {0.0};
    a.y = {1.7};
    b.x = a.y;
    b.y = a.x;
    CHECK(neumann_green(a) == neumann_green(b));
}

TEST_CASE("semigroup composition") {
    const double t1 = 0.03, t2 = 0.05;
    const double x = 0.4, y = 1.1;
    const double hi = y + 14.0 * std::sqrt(t1 + t2);
    const double lhs = simpson(
        [&](double z) { return green1(x, z, t1) * green1(z, y, t2); }, 0.0, hi, 20000);
    CHECK(lhs == doctest::Approx(green1(x, y, t1 + t2)).epsilon(1e-5));

    KernelQuery g;
    g.N = 2;
    const double x2[] = {0.2, 0.6}, y2[] = {-0.3, 0.1};
    auto green2 = [&g](const double* a, const double* c, double t) {
        g.x = {a[0], a[1]};
        g.y = {c[0], c[1]};
        g.t = t;
        return neumann_green(g);
    };
    const double r = 14.0 * std::sqrt(t1 + t2);
    const double lhs2 = simpson(
        [&](double z1) {
            return simpson(
                [&](double z2) {
                    const double z[] = {z1, z2};
                    return green2(x2, z, t1) * green2(z, y2, t2);
                },
                0.0, 0.6 + r, 1600);
        },
        -r, 0.5 + r, 1600);
    CHECK(lhs2 == doctest::Approx(green2(x2, y2, t1 + t2)).epsilon(1e-5));
}

TEST_CASE("free evolution: constants and gaussian growth in closed form") {
    const double x1[] = {0.7};
    CHECK(free_propagate(InitialProfile::constant(3.0), 2.0, x1, 0.5, 1) ==
          doctest::Approx(6.0).epsilon(1e-14));

    const auto g = InitialProfile::gaussian_growth(0.3);
    const double x2[] = {1.5, 0.7};
    const double shrink = 1.0 - 4.0 * 0.3 * 0.4;
    CHECK(free_propagate(g, 2.0, x2, 0.4, 2) ==
          doctest::Approx(2.0 * std::exp(0.3 * 0.49 / shrink) / std::sqrt(shrink))
              .epsilon(1e-14));

    try {
        free_propagate(g, 1.0, x2, 1.0, 2);
        FAIL("expected LinearBlowupError");
    } catch (const LinearBlowupError& e) {
        CHECK(e.t_blowup == doctest::Approx(1.0 / 1.2).epsilon(1e-14));
    }
}

TEST_CASE("free evolution: initial time and support clipping") {
    const auto s = InitialProfile::singular_log(0.5, 0.0);
    const double x[] = {0.25};
    CHECK(free_propagate(s, 3.0, x, 0.0, 1) == doctest::Approx(6.0).epsilon(1e-12));

    // far from the unit support with a short reach: nothing arrives yet
    const double far[] = {10.0};
    CHECK(free_propagate(s, 1.0, far, 0.01, 1) == 0.0);
}

TEST_CASE("free evolution of singular data against substitution oracles") {
    const quad::Tolerance tight{1e-11, 1e-10};

    // psi = |y|^{-1/2} on (0,1), x = 0: substituting y = u^2 removes the head,
    //   F = 4 (4 pi t)^{-1/2} int_0^1 exp(-u^4 / 4t) du.
    const double t = 0.01;
    const double oracle =
        4.0 / std::sqrt(4.0 * M_PI * t) *
        simpson([t](double u) { return std::exp(-std::pow(u, 4.0) / (4.0 * t)); }, 0.0, 1.0,
                20000);
    const double x0[] = {0.0};
    CHECK(free_propagate(InitialProfile::singular_log(0.5, 0.0), 1.0, x0, t, 1, tight) ==
          doctest::Approx(oracle).epsilon(1e-7));

    // psi = |y|^{-0.8} [log(e+1/|y|)]^{-1.2}, x = 0.2: substituting y = e^{-v}
    // gives a smooth exponentially decaying integrand on [0, 700].
    const double tb = 0.02, xb = 0.2, kap = 1.3;
    auto ker = [xb, tb](double y) {
        return gauss_kernel_1d(xb - y, tb) + gauss_kernel_1d(xb + y, tb);
    };
    const double oracle_b = simpson(
        [&](double v) {
            return ker(std::exp(-v)) * kap * std::exp(-0.2 * v) *
                   std::pow(std::log(std::exp(1.0) + std::exp(v)), -1.2);
        },
        0.0, 700.0, 40000);
    const double xp[] = {xb};
    CHECK(free_propagate(InitialProfile::singular_log(0.8, 1.2), kap, xp, tb, 1, tight) ==
          doctest::Approx(oracle_b).epsilon(1e-7));

    // psi = (1+|y|)^{-3/2} has no head; plain grid oracle on the kernel window
    const double tc = 0.05, xc = 0.3;
    auto kerc = [xc, tc](double y) {
        return gauss_kernel_1d(xc - y, tc) + gauss_kernel_1d(xc + y, tc);
    };
    const double hic = xc + 14.0 * std::sqrt(tc);
    const double oracle_c = simpson(
        [&](double y) { return kerc(y) * 2.0 * std::pow(1.0 + y, -1.5); }, 0.0, hic, 20000);
    const double xq[] = {xc};
    CHECK(free_propagate(InitialProfile::power_decay(1.5), 2.0, xq, tc, 1, tight) ==
          doctest::Approx(oracle_c).epsilon(1e-7));

    // non-integrable head: the free solution is +inf at the wall
    CHECK(free_propagate(InitialProfile::singular_log(1.0, 0.0), 1.0, x0, t, 1) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("free evolution argument validation") {
    const auto c = InitialProfile::constant(1.0);
    const double x[] = {0.5};
    const double x2[] = {0.5, 0.5};
    CHECK_THROWS_AS(free_propagate(c, 0.0, x, 0.1, 1), DomainError);
    CHECK_THROWS_AS(free_propagate(c, 1.0, x, -0.1, 1), DomainError);
    CHECK_THROWS_AS(free_propagate(c, 1.0, x2, 0.1, 1), DomainError);
    const double neg[] = {-0.5};
    CHECK_THROWS_AS(free_propagate(c, 1.0, neg, 0.1, 1), DomainError);
    CHECK_THROWS_AS(
        free_propagate(InitialProfile::power_decay(1.0), 1.0, x2, 0.1, 2), InapplicableError);

    KernelQuery q;
    q.N = 2;
    q.x = {0.0, 0.0};
    q.y = {0.0};
    q.t = 0.1;
    CHECK_THROWS_AS(neumann_green(q), DomainError);
    q.y = {0.0, -1.0};
    CHECK_THROWS_AS(neumann_green(q), DomainError);
}

}  // TEST_SUITE
