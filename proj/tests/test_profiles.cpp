#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "lifespan/profiles.hpp"

using namespace lifespan;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    // n even panels
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_SUITE("profiles") {

TEST_CASE("pointwise closed forms") {
    const double x14[1] = {0.25};
    CHECK(eval_profile(InitialProfile::singular_log(0.5, 0.0), x14) == doctest::Approx(2.0).epsilon(1e-12));

    const double x1[1] = {1.0};
    CHECK(eval_profile(InitialProfile::power_decay(2.0), x1) == doctest::Approx(0.25).epsilon(1e-12));

    const double x2[1] = {2.0};
    CHECK(eval_profile(InitialProfile::gaussian_growth(0.3), x2) ==
          doctest::Approx(std::exp(1.2)).epsilon(1e-12));

    CHECK(eval_profile(InitialProfile::constant(3.5), x2) == 3.5);

    // log-weighted singular value against the defining formula
    const double r = 0.1;
    const double xr[1] = {r};
    const double expect = std::pow(r, -0.7) * std::pow(std::log(M_E + 1.0 / r), -1.3);
    CHECK(eval_profile(InitialProfile::singular_log(0.7, 1.3), xr) ==
          doctest::Approx(expect).epsilon(1e-13));

    // outside the unit-ball support
    const double far[1] = {1.5};
    CHECK(eval_profile(InitialProfile::singular_log(0.5, 0.0), far) == 0.0);

    // unbounded at the origin
    const double zero[1] = {0.0};
    CHECK(eval_profile(InitialProfile::singular_log(0.5, 0.0), zero) == kInf);

    // 2D point off the axis
    const double xy[2] = {0.3, 0.4};  // |x| = 0.5
    CHECK(eval_profile(InitialProfile::power_decay(1.0), xy) ==
          doctest::Approx(1.0 / 1.5).epsilon(1e-13));
}

TEST_CASE("admissibility matches the local-integrability table") {
    auto sl = [](double A, double B) { return InitialProfile::singular_log(A, B); };
    CHECK(admissible(sl(0.0, 0.5), 1));
    CHECK_FALSE(admissible(sl(0.0, 0.0), 1));
    CHECK_FALSE(admissible(sl(0.0, -1.0), 1));
    CHECK(admissible(sl(0.5, -7.0), 1));  // 0 < A < N takes any B
    CHECK_FALSE(admissible(sl(1.0, 1.0), 1));   // A = N needs B > 1
    CHECK(admissible(sl(1.0, 1.5), 1));
    CHECK_FALSE(admissible(sl(1.5, 0.0), 1));  // A > N
    CHECK(admissible(sl(2.0, 0.0), 3));
    CHECK(admissible(InitialProfile::power_decay(3.0), 1));
    CHECK(admissible(InitialProfile::gaussian_growth(1.0), 2));
    CHECK(admissible(InitialProfile::constant(1.0), 1));
}

TEST_CASE("radial view and support") {
    CHECK(is_radial(InitialProfile::power_decay(1.0)));
    CHECK(is_radial(InitialProfile::singular_log(0.5, 0.0)));
    CHECK(is_radial(InitialProfile::constant(2.0)));
    CHECK_FALSE(is_radial(InitialProfile::gaussian_growth(0.5)));

    CHECK(eval_radial(InitialProfile::power_decay(2.0), 1.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(eval_radial(InitialProfile::gaussian_growth(0.5), 1.0), DomainError);

    CHECK(support_radius(InitialProfile::singular_log(0.5, 0.0)) == 1.0);
    CHECK(support_radius(InitialProfile::power_decay(2.0)) == kInf);
    CHECK(support_radius(InitialProfile::constant(1.0)) == kInf);
}

TEST_CASE("boundary value and origin exponents") {
    CHECK(boundary_value(InitialProfile::constant(2.5)) == 2.5);
    CHECK(boundary_value(InitialProfile::power_decay(4.0)) == 1.0);
    CHECK(boundary_value(InitialProfile::gaussian_growth(0.2)) == 1.0);
    CHECK(boundary_value(InitialProfile::singular_log(0.5, 0.0)) == kInf);
    CHECK(boundary_value(InitialProfile::singular_log(0.0, 2.0)) == 0.0);

    const auto oe = origin_exponents(InitialProfile::singular_log(0.7, -1.5));
    CHECK(oe.mu == 0.7);
    CHECK(oe.nu == -1.5);
    CHECK(origin_exponents(InitialProfile::power_decay(2.0)).mu == 0.0);
}

TEST_CASE("half-ball mass closed forms") {
    // constant: c * |B_+(0, sigma)|
    CHECK(half_ball_mass(InitialProfile::constant(2.0), 0.7, 1) ==
          doctest::Approx(1.4).epsilon(1e-10));
    CHECK(half_ball_mass(InitialProfile::constant(1.0), 0.5, 3) ==
          doctest::Approx((2.0 / 3.0) * M_PI * 0.125).epsilon(1e-10));

    // int_0^sigma r^{-1/2} dr = 2 sqrt(sigma), clipped at the unit support
    const auto sqrt_sing = InitialProfile::singular_log(0.5, 0.0);
    CHECK(half_ball_mass(sqrt_sing, 1.0, 1) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(half_ball_mass(sqrt_sing, 0.25, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(half_ball_mass(sqrt_sing, 3.0, 1) == doctest::Approx(2.0).epsilon(1e-10));

    // N = 3, A = 2: (1/2) N V_N int_0^sigma r^{-2} r^2 dr = 2 pi sigma
    CHECK(half_ball_mass(InitialProfile::singular_log(2.0, 0.0), 0.5, 3) ==
          doctest::Approx(M_PI).epsilon(1e-9));

    // power decay, N = 1: sigma / (1 + sigma)
    CHECK(half_ball_mass(InitialProfile::power_decay(2.0), 3.0, 1) ==
          doctest::Approx(0.75).epsilon(1e-10));

    // divergent singular heads
    CHECK(half_ball_mass(InitialProfile::singular_log(2.0, 0.0), 0.5, 2) == kInf);
    CHECK(half_ball_mass(InitialProfile::singular_log(1.0, 0.0), 0.5, 1) == kInf);
    CHECK(half_ball_mass(InitialProfile::singular_log(1.0, 2.0), 0.5, 1) > 0.0);
    CHECK(std::isfinite(half_ball_mass(InitialProfile::singular_log(1.0, 2.0), 0.5, 1)));

    // gaussian growth, N = 1: int_0^sigma exp(l y^2) dy vs Simpson
    const double l = 0.8, sig = 1.3;
    const double expect =
        simpson([&](double y) { return std::exp(l * y * y); }, 0.0, sig, 200000);
    CHECK(half_ball_mass(InitialProfile::gaussian_growth(l), sig, 1) ==
          doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("grammar round trips") {
    const char* texts[] = {"singular-log:A=0.5,B=-7", "power-decay:A=2.25",
                           "gaussian-growth:lambda=0.125", "constant:c=3"};
    for (const char* t : texts) {
        const InitialProfile p = parse_profile(t);
        const InitialProfile q = parse_profile(format_profile(p));
        CHECK(p.kind == q.kind);
        CHECK(p.A == q.A);
        CHECK(p.B == q.B);
        CHECK(p.lambda == q.lambda);
        CHECK(p.c == q.c);
    }
    CHECK(parse_profile("singular-log:A=0.5,B=0").A == 0.5);
    CHECK_THROWS_AS(parse_profile("box:w=1"), ParseError);
    CHECK_THROWS_AS(parse_profile("singular-log:A=oops,B=0"), ParseError);
    CHECK_THROWS_AS(parse_profile("singular-log:A=0.5"), ParseError);
    CHECK_THROWS_AS(parse_profile("power-decay"), ParseError);
}

TEST_CASE("orlicz pair: inverse identity and closed form") {
    for (int N : {1, 2, 3}) {
        for (double s = 1e-8; s < 1e8; s *= 13.7) {
            const double tau = phi_orlicz(s, N);
            CHECK(std::abs(phi_inverse(tau, N) - s) <= 1e-10 * std::max(1.0, s));
        }
    }
    CHECK(phi_orlicz(1.0, 2) == doctest::Approx(std::pow(std::log(M_E + 1.0), 2)).epsilon(1e-13));
    // rho formula and monotonicity
    CHECK(rho(0.3, 2) ==
          doctest::Approx(std::pow(0.3, -2) * std::pow(std::log(M_E + 1.0 / 0.3), -2))
              .epsilon(1e-13));
    double prev = kInf;
    for (double s = 1e-4; s <= 1.0; s *= 1.7) {
        const double r = rho(s, 1);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("power-log comparison function round trip") {
    const PowerLogSpec incr{1.0, -0.5};  // increasing everywhere
    CHECK(psi_monotone_end(incr) == kInf);
    for (double tau = 1e-10; tau < 1e3; tau *= 29.0) {
        const double y = psi_power_log(tau, incr);
        CHECK(psi_inverse(y, incr) == doctest::Approx(tau).epsilon(1e-12));
    }

    const PowerLogSpec bent{0.25, 1.0};  // increasing only near 0
    const double tau1 = psi_monotone_end(bent);
    CHECK(std::isfinite(tau1));
    CHECK(tau1 > 0.0);
    for (double f = 1e-9; f <= 0.9; f *= 31.0) {
        const double tau = f * tau1;
        const double y = psi_power_log(tau, bent);
        CHECK(psi_inverse(y, bent) == doctest::Approx(tau).epsilon(1e-12));
    }
    // derivative changes sign at tau1
    const double eps = 1e-7 * tau1;
    CHECK(psi_power_log(tau1 - eps, bent) <= psi_power_log(tau1, bent));
    CHECK(psi_power_log(tau1 + eps, bent) <= psi_power_log(tau1, bent));
    CHECK_THROWS_AS(psi_inverse(2.0 * psi_power_log(tau1, bent), bent), DomainError);
}

}  // TEST_SUITE
