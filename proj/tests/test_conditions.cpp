#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "lifespan/conditions.hpp"
#include "lifespan/errors.hpp"

using namespace lifespan;

namespace {

ProblemSpec make(int N, double p, double kappa, InitialProfile psi) {
    ProblemSpec s;
    s.N = N;
    s.p = Exponent::from_double(p);
    s.kappa = kappa;
    s.profile = std::move(psi);
    return s;
}

/// Coarse scan plus one refinement pass; enough for 1e-10 on smooth data.
double brute_sup(const std::function<double(double)>& f, double lo, double hi) {
    const int n = 200000;
    double best = -kInf, xb = lo;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = f(x);
        if (v > best) {
            best = v;
            xb = x;
        }
    }
    const double h = 2.0 * (hi - lo) / n;
    const double rl = std::max(lo, xb - h), rh = std::min(hi, xb + h);
    for (int i = 0; i <= 4000; ++i) {
        const double x = rl + (rh - rl) * i / 4000.0;
        best = std::max(best, f(x));
    }
    return best;
}

/// int_a^b exp(-l y^2) dy in closed form.
double gauss_mass(double l, double a, double b) {
    if (b <= a) return 0.0;
    if (l == 0.0) return b - a;
    const double r = std::sqrt(l);
    return 0.5 * std::sqrt(M_PI / l) * (std::erf(r * b) - std::erf(r * a));
}

/// The exact geometric sigma grid produced by sigma_grid_size = n.
std::vector<double> exact_grid(double T, double span, int n) {
    const double smax = std::sqrt(T), smin = span * smax;
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(smin * std::pow(smax / smin, i / (n - 1.0)));
    g.back() = smax;
    return g;
}

/// sup_x w(x) * int_{B(x,s) cap half-line} c dy for the weighted-mass condition.
double nec_sup_const_1d(double c, double sigma, double delta) {
    const double w = (1.0 + delta) / (4.0 * sigma * sigma);
    return brute_sup(
        [&](double x) {
            return std::exp(-w * x * x) * c * std::min(2.0 * sigma, x + sigma);
        },
        0.0, 6.0 * sigma);
}

}  // namespace

TEST_SUITE("conditions") {

TEST_CASE("weighted-mass condition margin matches a brute-force oracle") {
    GammaConfig g;
    g.gamma1 = 1.2;
    g.sigma_grid_size = 4;
    const double kappa = 0.7, T = 0.3, c = 2.0;
    const ProblemSpec prob = make(1, 3.0, kappa, InitialProfile::constant(c));

    double expect = -kInf, worst = 0.0;
    const double expo = 1.0 - 0.5;  // N - 1/(p-1)
    for (double s : exact_grid(T, g.sigma_span, 4)) {
        const double m =
            std::log(kappa * nec_sup_const_1d(c, s, g.delta)) - std::log(1.2 * std::pow(s, expo));
        if (m > expect) {
            expect = m;
            worst = s;
        }
    }

    const ConditionVerdict v = necessary_general(prob, T, g);
    CHECK(v.name == "necessary-general");
    CHECK(v.margin == doctest::Approx(expect).epsilon(1e-7));
    CHECK(v.worst_sigma == doctest::Approx(worst).epsilon(1e-12));
    CHECK(v.holds == (expect <= 0.0));
    CHECK_FALSE(v.holds);

    // a large admissible constant flips the verdict without moving the sup
    GammaConfig loose = g;
    loose.gamma1 = 30.0;
    const ConditionVerdict v2 = necessary_general(prob, T, loose);
    CHECK(v2.margin == doctest::Approx(expect + std::log(1.2 / 30.0)).epsilon(1e-7));
    CHECK(v2.holds);
}

TEST_CASE("critical-mass condition margin matches a brute-force oracle") {
    GammaConfig g;
    g.gamma1p = 0.9;
    g.sigma_grid_size = 4;
    const double kappa = 1.1, T = 0.4, c = 1.5;
    const ProblemSpec prob = make(1, 2.0, kappa, InitialProfile::constant(c));

    double expect = -kInf, worst = 0.0;
    for (double s : exact_grid(T, g.sigma_span, 4)) {
        const double rhs = 0.9 / std::log(M_E + std::sqrt(T) / s);
        const double m = std::log(kappa * nec_sup_const_1d(c, s, g.delta)) - std::log(rhs);
        if (m > expect) {
            expect = m;
            worst = s;
        }
    }

    const ConditionVerdict v = necessary_critical(prob, T, g);
    CHECK(v.name == "necessary-critical");
    CHECK(v.margin == doctest::Approx(expect).epsilon(1e-7));
    CHECK(v.worst_sigma == doctest::Approx(worst).epsilon(1e-12));
}

TEST_CASE("subcritical sufficient margin matches a closed-form oracle") {
    GammaConfig g;
    g.gamma2 = 0.8;
    const double kappa = 2.0, T = 0.25, c = 1.5;
    const ProblemSpec prob = make(1, 1.5, kappa, InitialProfile::constant(c));

    const double rootT = std::sqrt(T);
    const double lam = (1.0 - g.delta) / (4.0 * T);
    const double S = brute_sup(
        [&](double x) {
            return c * gauss_mass(lam, std::max(0.0, x - rootT), x + rootT) /
                   std::min(2.0 * rootT, x + rootT);
        },
        0.0, 6.0 * rootT);
    const double expect = std::log(kappa * S) - std::log(0.8 * std::pow(T, -1.0));

    const ConditionVerdict v = sufficient_subcritical(prob, T, g);
    CHECK(v.name == "sufficient-subcritical");
    CHECK(v.margin == doctest::Approx(expect).epsilon(1e-7));
    CHECK(v.worst_sigma == doctest::Approx(rootT).epsilon(1e-12));
}

TEST_CASE("split sufficient condition on constant data") {
    GammaConfig g;
    g.gamma3 = 1.1;
    g.sigma_grid_size = 6;
    const double kappa = 0.5, T = 0.36, c = 2.0;
    const ProblemSpec prob = make(1, 3.0, kappa, InitialProfile::constant(c));

    const double rootT = std::sqrt(T);
    // far field: mass above the root-T line, averaged over the unrestricted ball
    const double lam = (1.0 - g.delta) / (4.0 * T);
    const double far = brute_sup(
        [&](double x) {
            return c * gauss_mass(lam, std::max(rootT, x - rootT), x + rootT) /
                   std::min(2.0 * rootT, x + rootT);
        },
        0.0, 10.0 * rootT);
    double expect = std::log(kappa * far) - std::log(1.1 * std::pow(T, -0.25));
    double worst = rootT;
    // near field: averages of a constant are exact, so the margin is closed-form
    for (double s : exact_grid(T, g.sigma_span, 6)) {
        const double m = std::log(kappa * c) - std::log(1.1 * std::pow(s, -0.5));
        if (m > expect) {
            expect = m;
            worst = s;
        }
    }

    const ConditionVerdict v = sufficient_split(prob, T, g);
    CHECK(v.name == "sufficient-split");
    CHECK(v.margin == doctest::Approx(expect).epsilon(1e-6));
    CHECK(v.worst_sigma == doctest::Approx(worst).epsilon(1e-12));
    CHECK(v.holds);
}

TEST_CASE("kappa scaling shifts margins by exactly log kappa") {
    ConditionEvaluator nec(make(1, 3.0, 1.0, InitialProfile::constant(1.0)), GammaConfig{});
    const double m1 = nec.necessary_general(1.0, 0.2).margin;
    const double m2 = nec.necessary_general(2.0, 0.2).margin;
    CHECK(m2 - m1 == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    ConditionEvaluator suf(make(1, 1.5, 1.0, InitialProfile::constant(1.0)), GammaConfig{});
    const double s1 = suf.sufficient_subcritical(1.0, 0.2).margin;
    const double s2 = suf.sufficient_subcritical(3.0, 0.2).margin;
    CHECK(s2 - s1 == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("regime dispatch picks the sharp condition for p") {
    GammaConfig g;
    g.sigma_grid_size = 4;
    const auto c1 = InitialProfile::constant(1.0);
    CHECK(ConditionEvaluator(make(1, 2.0, 1.0, c1), g).necessary(1.0, 0.1).name ==
          "necessary-critical");
    CHECK(ConditionEvaluator(make(1, 1.7, 1.0, c1), g).necessary(1.0, 0.1).name ==
          "necessary-general");
    CHECK(ConditionEvaluator(make(2, 1.5, 1.0, c1), g).necessary(1.0, 0.1).name ==
          "necessary-critical");
    CHECK(ConditionEvaluator(make(1, 1.5, 1.0, c1), g).sufficient(1.0, 0.1).name ==
          "sufficient-subcritical");
    CHECK(ConditionEvaluator(make(1, 2.0, 1.0, c1), g).sufficient(1.0, 0.1).name ==
          "sufficient-critical");
    CHECK(ConditionEvaluator(make(1, 3.0, 1.0, c1), g).sufficient(1.0, 0.1).name ==
          "sufficient-split");

    ConditionEvaluator e(make(1, 1.9, 1.0, c1), g);
    CHECK_THROWS_AS(e.necessary_critical(1.0, 0.1), WrongRegimeError);
    CHECK_THROWS_AS(e.sufficient_critical(1.0, 0.1), WrongRegimeError);
    CHECK_THROWS_WITH_AS(ConditionEvaluator(make(1, 2.5, 1.0, c1), g).sufficient_subcritical(1.0, 0.1),
                         "sufficient-subcritical applies to 1 < p < 1 + 1/N only",
                         WrongRegimeError);
}

TEST_CASE("split exponent resolution") {
    GammaConfig g;
    CHECK(g.resolve_a(make(1, 2.0, 1.0, InitialProfile::constant(1.0))) ==
          doctest::Approx(1.5).epsilon(1e-14));
    CHECK(g.resolve_a(make(1, 3.0, 1.0, InitialProfile::singular_log(0.9, 0.0))) ==
          doctest::Approx((1.0 / 0.9) * (1.0 - 1e-6)).epsilon(1e-12));

    GammaConfig ex;
    ex.a = 1.3;
    CHECK(ex.resolve_a(make(1, 2.0, 1.0, InitialProfile::constant(1.0))) == 1.3);
    ex.a = 2.5;
    CHECK_THROWS_AS(ex.resolve_a(make(1, 2.0, 1.0, InitialProfile::constant(1.0))), DomainError);

    // psi^a cannot be made locally integrable when A is too close to p-scaling
    CHECK_THROWS_AS(
        GammaConfig{}.resolve_a(make(1, 3.0, 1.0, InitialProfile::singular_log(1.2, 0.0))),
        InapplicableError);
}

TEST_CASE("lifespan bounds: monotone in kappa, capped by gaussian growth") {
    GammaConfig g;
    g.sigma_grid_size = 24;
    g.sigma_span = 1e-4;
    g.t_lo = 1e-4;
    g.t_hi = 1e4;

    ProblemSpec prob = make(1, 2.0, 0.5, InitialProfile::constant(1.0));
    std::vector<double> ts;
    for (double k : {0.5, 1.0, 2.0}) {
        prob.kappa = k;
        const LifespanBound b = upper_bound_lifespan(prob, g);
        REQUIRE(b.kind == BoundKind::Value);
        ts.push_back(b.T);
    }
    CHECK(ts[0] >= ts[1] * (1.0 - 5e-3));
    CHECK(ts[1] >= ts[2] * (1.0 - 5e-3));
    CHECK(ts[0] > ts[2]);

    // e^{lambda x^2} data: the weighted sup diverges once sigma^2 > (1+delta)/(4 lambda),
    // so no upper bound can ever exceed that, and for small kappa the two bounds
    // straddle the finite limit 1/(4 lambda) = 1.
    ProblemSpec gg = make(1, 2.0, 1e-6, InitialProfile::gaussian_growth(0.25));
    const LifespanBound up = upper_bound_lifespan(gg, g);
    const LifespanBound lo = lower_bound_lifespan(gg, g);
    REQUIRE(up.kind == BoundKind::Value);
    REQUIRE(lo.kind == BoundKind::Value);
    CHECK(up.T <= 1.5 * (1.0 + 5e-3));
    CHECK(up.T >= 1.0);
    CHECK(lo.T <= 1.0);
    CHECK(lo.T > 0.0);
}

TEST_CASE("lifespan bounds: grid saturation at extreme constants") {
    GammaConfig g;
    g.sigma_grid_size = 8;
    g.t_lo = 1e-3;
    g.t_hi = 1e3;
    const ProblemSpec prob = make(1, 2.0, 1.0, InitialProfile::constant(1.0));

    GammaConfig loose = g;
    loose.gamma1p = 1e200;
    const LifespanBound u1 = upper_bound_lifespan(prob, loose);
    CHECK(u1.kind == BoundKind::UnboundedOnGrid);
    CHECK(u1.T == 1e3);

    GammaConfig tight = g;
    tight.gamma1p = 1e-200;
    CHECK(upper_bound_lifespan(prob, tight).kind == BoundKind::Zero);

    loose = g;
    loose.gamma4 = 1e200;
    CHECK(lower_bound_lifespan(prob, loose).kind == BoundKind::UnboundedOnGrid);
    tight = g;
    tight.gamma4 = 1e-200;
    CHECK(lower_bound_lifespan(prob, tight).kind == BoundKind::Zero);
}

TEST_CASE("config validation") {
    GammaConfig g;
    g.delta = 1.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = GammaConfig{};
    g.gamma2 = 0.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = GammaConfig{};
    g.t_lo = 2.0;
    g.t_hi = 1.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = GammaConfig{};
    g.a = 0.5;
    CHECK_THROWS_AS(g.validate(), DomainError);

    CHECK_THROWS_AS(
        ConditionEvaluator(make(1, 2.0, 1.0, InitialProfile::constant(1.0)), GammaConfig{})
            .necessary(1.0, 0.0),
        DomainError);
    CHECK_THROWS_AS(
        ConditionEvaluator(make(1, 2.0, 1.0, InitialProfile::constant(1.0)), GammaConfig{})
            .necessary(-1.0, 0.1),
        DomainError);
}

}  // TEST_SUITE
