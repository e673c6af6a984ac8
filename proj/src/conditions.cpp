#include "lifespan/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "lifespan/parallel.hpp"
#include "lifespan/rational.hpp"

namespace lifespan {

namespace {

/// log(LHS/RHS); -inf for a vanishing LHS so empty data always passes.
double log_ratio(double lhs, double rhs) {
    if (lhs <= 0.0) return -kInf;
    if (std::isinf(lhs)) return kInf;
    return std::log(lhs) - std::log(rhs);
}

void track(ConditionVerdict& v, double sigma, double m) {
    if (m > v.margin) {
        v.margin = m;
        v.worst_sigma = sigma;
    }
}

void require_time(double T) {
    if (!(T > 0.0)) throw DomainError("existence time T must be > 0");
}

void require_kappa(double kappa) {
    if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
}

}  // namespace

// --- GammaConfig ------------------------------------------------------------

void GammaConfig::validate() const {
    if (!(gamma1 > 0.0 && gamma1p > 0.0 && gamma2 > 0.0 && gamma3 > 0.0 && gamma4 > 0.0))
        throw DomainError("gamma constants must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
    if (a != 0.0 && !(a > 1.0)) throw DomainError("split exponent a must be > 1 (or 0 = auto)");
    if (sigma_per_decade < 1) throw DomainError("sigma_per_decade must be >= 1");
    if (!(sigma_span > 0.0 && sigma_span < 1.0)) throw DomainError("sigma_span must be in (0, 1)");
    if (sigma_grid_size < 0) throw DomainError("sigma_grid_size must be >= 0");
    if (!(t_lo > 0.0 && t_hi > t_lo)) throw DomainError("need 0 < t_lo < t_hi");
    if (!(bisect_rtol > 0.0 && bisect_rtol < 0.5)) throw DomainError("bisect_rtol out of range");
}

double GammaConfig::resolve_a(const ProblemSpec& prob) const {
    if (a != 0.0) {
        if (!(a < prob.p.value)) throw DomainError("split exponent a must lie in (1, p)");
        return a;
    }
    double cand = 0.5 * (1.0 + prob.p.value);
    if (prob.profile.kind == ProfileKind::SingularLog && prob.profile.A > 0.0)
        cand = std::min(cand, (prob.N / prob.profile.A) * (1.0 - 1e-6));
    if (!(cand > 1.0))
        throw InapplicableError("no split exponent a in (1, p) keeps psi^a locally integrable");
    return cand;
}

// --- evaluator --------------------------------------------------------------

ConditionEvaluator::ConditionEvaluator(ProblemSpec prob, GammaConfig g)
    : prob_(std::move(prob)), g_(g) {
    prob_.validate();
    g_.validate();
}

double ConditionEvaluator::sigma_at(long k) const {
    return std::pow(10.0, static_cast<double>(k) / g_.sigma_per_decade);
}

std::vector<ConditionEvaluator::GridPoint> ConditionEvaluator::sigma_grid(double T) const {
    const double smax = std::sqrt(T);
    const double smin = g_.sigma_span * smax;
    std::vector<GridPoint> grid;

    if (g_.sigma_grid_size > 0) {
        const int n = g_.sigma_grid_size;
        if (n == 1) {
            grid.push_back({smax, std::nullopt});
            return grid;
        }
        for (int i = 0; i < n; ++i)
            grid.push_back({smin * std::pow(smax / smin, i / (n - 1.0)), std::nullopt});
        grid.back().sigma = smax;
        return grid;
    }

    const double spd = g_.sigma_per_decade;
    const long klo = static_cast<long>(std::ceil(std::log10(smin) * spd - 1e-9));
    const long khi = static_cast<long>(std::floor(std::log10(smax) * spd + 1e-9));
    for (long k = klo; k <= khi; ++k) grid.push_back({sigma_at(k), k});
    if (grid.empty() || grid.back().sigma < smax * (1.0 - 1e-12))
        grid.push_back({smax, std::nullopt});
    else
        grid.back().sigma = smax;  // snap the near-coincident endpoint exactly
    return grid;
}

ConditionEvaluator::CachedSup ConditionEvaluator::necessary_sup(double sigma) {
    quad::BallQuery q;
    q.profile = prob_.profile;
    q.N = prob_.N;
    q.sigma = sigma;
    q.kind = quad::IntegrandKind::PlainPower;
    q.power = 1.0;
    q.tol = g_.quad_tol;
    const double c = (1.0 + g_.delta) / (4.0 * sigma * sigma);
    auto f = [&](double x) { return std::exp(-c * x * x) * quad::ball_integral(q, x); };
    const quad::SupResult r =
        quad::maximize_on_axis(f, sigma, support_radius(prob_.profile));
    return {r.value, r.argmax, r.unbounded};
}

double ConditionEvaluator::necessary_sup_lattice(long k) {
    {
        std::scoped_lock lock(mu_);
        if (auto it = nec_cache_.find(k); it != nec_cache_.end()) return it->second;
    }
    const CachedSup s = necessary_sup(sigma_at(k));
    const double v = s.unbounded ? kInf : s.value;
    std::scoped_lock lock(mu_);
    return nec_cache_.emplace(k, v).first->second;
}

void ConditionEvaluator::prefill_necessary(const std::vector<GridPoint>& grid) {
    std::vector<long> missing;
    {
        std::scoped_lock lock(mu_);
        for (const GridPoint& gp : grid)
            if (gp.k && !nec_cache_.count(*gp.k)) missing.push_back(*gp.k);
    }
    if (missing.size() < 2 || par::thread_count() == 1) return;
    std::vector<double> vals(missing.size());
    par::parallel_for(missing.size(), [&](std::size_t i) {
        const CachedSup s = necessary_sup(sigma_at(missing[i]));
        vals[i] = s.unbounded ? kInf : s.value;
    });
    std::scoped_lock lock(mu_);
    for (std::size_t i = 0; i < missing.size(); ++i) nec_cache_.emplace(missing[i], vals[i]);
}

ConditionVerdict ConditionEvaluator::necessary_general(double kappa, double T) {
    require_kappa(kappa);
    require_time(T);
    ConditionVerdict v{true, "necessary-general", 0.0, -kInf};
    const double expo = prob_.N - prob_.p.inv_p_minus_1();
    const auto grid = sigma_grid(T);
    prefill_necessary(grid);
    for (const GridPoint& gp : grid) {
        double S;
        if (gp.k) {
            S = necessary_sup_lattice(*gp.k);
        } else {
            const CachedSup s = necessary_sup(gp.sigma);
            S = s.unbounded ? kInf : s.value;
        }
        track(v, gp.sigma, log_ratio(kappa * S, g_.gamma1 * std::pow(gp.sigma, expo)));
    }
    v.holds = v.margin <= 0.0;
    return v;
}

ConditionVerdict ConditionEvaluator::necessary_critical(double kappa, double T) {
    require_kappa(kappa);
    require_time(T);
    if (!prob_.p.is_critical(prob_.N))
        throw WrongRegimeError("necessary-critical applies to p = 1 + 1/N only");
    ConditionVerdict v{true, "necessary-critical", 0.0, -kInf};
    const double rootT = std::sqrt(T);
    const auto grid = sigma_grid(T);
    prefill_necessary(grid);
    for (const GridPoint& gp : grid) {
        double S;
        if (gp.k) {
            S = necessary_sup_lattice(*gp.k);
        } else {
            const CachedSup s = necessary_sup(gp.sigma);
            S = s.unbounded ? kInf : s.value;
        }
        const double rhs = g_.gamma1p * std::pow(std::log(M_E + rootT / gp.sigma), -prob_.N);
        track(v, gp.sigma, log_ratio(kappa * S, rhs));
    }
    v.holds = v.margin <= 0.0;
    return v;
}

ConditionVerdict ConditionEvaluator::far_field_part(double kappa, double T, double x_lo,
                                                    double gamma, const char* name) {
    const double rootT = std::sqrt(T);
    quad::BallQuery q;
    q.profile = prob_.profile;
    q.N = prob_.N;
    q.sigma = rootT;
    q.kind = quad::IntegrandKind::PlainPower;
    q.power = 1.0;
    q.gauss_lambda = (1.0 - g_.delta) / (4.0 * T);
    q.slab_above = rootT;
    q.tol = g_.quad_tol;
    auto f = [&](double x) { return quad::ball_average(q, x); };
    const quad::SupResult r =
        quad::maximize_on_axis(f, rootT, support_radius(prob_.profile), {}, x_lo);
    const double lhs = r.unbounded ? kInf : kappa * r.value;
    const double rhs = gamma * std::pow(T, -0.5 * prob_.p.inv_p_minus_1());
    ConditionVerdict v{true, name, rootT, log_ratio(lhs, rhs)};
    v.holds = v.margin <= 0.0;
    return v;
}

ConditionVerdict ConditionEvaluator::sufficient_subcritical(double kappa, double T) {
    require_kappa(kappa);
    require_time(T);
    if (!prob_.p.is_subcritical(prob_.N))
        throw WrongRegimeError("sufficient-subcritical applies to 1 < p < 1 + 1/N only");
    const double rootT = std::sqrt(T);
    quad::BallQuery q;
    q.profile = prob_.profile;
    q.N = prob_.N;
    q.sigma = rootT;
    q.kind = quad::IntegrandKind::PlainPower;
    q.power = 1.0;
    q.gauss_lambda = (1.0 - g_.delta) / (4.0 * T);
    q.tol = g_.quad_tol;
    auto f = [&](double x) { return quad::ball_average(q, x); };
    const quad::SupResult r = quad::maximize_on_axis(f, rootT, support_radius(prob_.profile));
    const double lhs = r.unbounded ? kInf : kappa * r.value;
    const double rhs = g_.gamma2 * std::pow(T, -0.5 * prob_.p.inv_p_minus_1());
    ConditionVerdict v{true, "sufficient-subcritical", rootT, log_ratio(lhs, rhs)};
    v.holds = v.margin <= 0.0;
    return v;
}

double ConditionEvaluator::split_a() {
    if (!a_) a_ = g_.resolve_a(prob_);
    return *a_;
}

ConditionEvaluator::CachedSup ConditionEvaluator::split_avg_sup(double sigma) {
    quad::BallQuery q;
    q.profile = prob_.profile;
    q.N = prob_.N;
    q.sigma = sigma;
    q.kind = quad::IntegrandKind::PlainPower;
    q.power = split_a();
    q.tol = g_.quad_tol;
    auto f = [&](double x) { return quad::ball_average(q, x); };
    const quad::SupResult r = quad::maximize_on_axis(f, sigma, support_radius(prob_.profile));
    return {r.value, r.argmax, r.unbounded};
}

const ConditionEvaluator::CachedSup& ConditionEvaluator::split_avg_sup_lattice(long k) {
    {
        std::scoped_lock lock(mu_);
        if (auto it = split_cache_.find(k); it != split_cache_.end()) return it->second;
    }
    const CachedSup s = split_avg_sup(sigma_at(k));
    std::scoped_lock lock(mu_);
    return split_cache_.emplace(k, s).first->second;
}

double ConditionEvaluator::split_part2_sup(double sigma, double rootT) {
    quad::BallQuery q;
    q.profile = prob_.profile;
    q.N = prob_.N;
    q.sigma = sigma;
    q.kind = quad::IntegrandKind::PlainPower;
    q.power = split_a();
    q.slab_below = rootT;
    q.tol = g_.quad_tol;
    auto f = [&](double x) { return quad::ball_average(q, x); };
    const quad::SupResult r = quad::maximize_on_axis(
        f, sigma, support_radius(prob_.profile), {}, 0.0, rootT);
    return r.unbounded ? kInf : r.value;
}

ConditionVerdict ConditionEvaluator::sufficient_split(double kappa, double T) {
    require_kappa(kappa);
    require_time(T);
    const double a = split_a();
    const double rootT = std::sqrt(T);

    ConditionVerdict v = far_field_part(kappa, T, 0.0, g_.gamma3, "sufficient-split");

    const double expo = -prob_.p.inv_p_minus_1();
    for (const GridPoint& gp : sigma_grid(T)) {
        double S;
        if (gp.k) {
            // The slab-free sup matches the restricted one whenever its argmax
            // keeps the whole ball inside { y_N < sqrt(T) }.
            const CachedSup& free = split_avg_sup_lattice(*gp.k);
            if (!free.unbounded && free.argmax + gp.sigma <= rootT)
                S = free.value;
            else
                S = split_part2_sup(gp.sigma, rootT);
        } else {
            S = split_part2_sup(gp.sigma, rootT);
        }
        const double lhs = std::isinf(S) ? kInf : kappa * std::pow(S, 1.0 / a);
        track(v, gp.sigma, log_ratio(lhs, g_.gamma3 * std::pow(gp.sigma, expo)));
    }
    v.holds = v.margin <= 0.0;
    return v;
}

ConditionVerdict ConditionEvaluator::sufficient_critical(double kappa, double T) {
    require_kappa(kappa);
    require_time(T);
    if (!prob_.p.is_critical(prob_.N))
        throw WrongRegimeError("sufficient-critical applies to p = 1 + 1/N only");
    const double rootT = std::sqrt(T);

    ConditionVerdict v = far_field_part(kappa, T, rootT, g_.gamma4, "sufficient-critical");

    const double scale = kappa * std::pow(T, 0.5 * prob_.p.inv_p_minus_1());
    for (const GridPoint& gp : sigma_grid(T)) {
        quad::BallQuery q;
        q.profile = prob_.profile;
        q.N = prob_.N;
        q.sigma = gp.sigma;
        q.kind = quad::IntegrandKind::Orlicz;
        q.orlicz_scale = scale;
        q.slab_below = rootT;
        q.tol = g_.quad_tol;
        auto f = [&](double x) { return quad::ball_average(q, x); };
        const quad::SupResult r = quad::maximize_on_axis(
            f, gp.sigma, support_radius(prob_.profile), {}, 0.0, rootT);
        const double lhs =
            (r.unbounded || std::isinf(r.value)) ? kInf : phi_inverse(r.value, prob_.N);
        const double rhs = g_.gamma4 * rho(gp.sigma / rootT, prob_.N);
        track(v, gp.sigma, log_ratio(lhs, rhs));
    }
    v.holds = v.margin <= 0.0;
    return v;
}

ConditionVerdict ConditionEvaluator::necessary(double kappa, double T) {
    if (prob_.p.is_critical(prob_.N)) return necessary_critical(kappa, T);
    return necessary_general(kappa, T);
}

ConditionVerdict ConditionEvaluator::sufficient(double kappa, double T) {
    if (prob_.p.is_subcritical(prob_.N)) return sufficient_subcritical(kappa, T);
    if (prob_.p.is_critical(prob_.N)) return sufficient_critical(kappa, T);
    return sufficient_split(kappa, T);
}

LifespanBound ConditionEvaluator::upper_bound(double kappa) {
    require_kappa(kappa);
    auto ok = [&](double T) { return necessary(kappa, T).holds; };
    if (!ok(g_.t_lo)) return {BoundKind::Zero, 0.0};
    if (ok(g_.t_hi)) return {BoundKind::UnboundedOnGrid, g_.t_hi};
    double lo = g_.t_lo, hi = g_.t_hi;
    while (hi / lo - 1.0 > g_.bisect_rtol) {
        const double mid = std::sqrt(lo * hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return {BoundKind::Value, lo};
}

LifespanBound ConditionEvaluator::lower_bound(double kappa) {
    require_kappa(kappa);
    auto ok = [&](double T) { return sufficient(kappa, T).holds; };

    const double step = std::pow(10.0, 0.25);
    double fail_above = 0.0;
    double hold_at = 0.0;
    for (double T = g_.t_hi;; T /= step) {
        if (T < g_.t_lo * (1.0 + 1e-12)) T = g_.t_lo;
        if (ok(T)) {
            hold_at = T;
            break;
        }
        fail_above = T;
        if (T == g_.t_lo) break;
    }
    if (hold_at == 0.0) return {BoundKind::Zero, 0.0};
    if (fail_above == 0.0) return {BoundKind::UnboundedOnGrid, g_.t_hi};
    double lo = hold_at, hi = fail_above;
    while (hi / lo - 1.0 > g_.bisect_rtol) {
        const double mid = std::sqrt(lo * hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return {BoundKind::Value, lo};
}

// --- one-shot wrappers ------------------------------------------------------

namespace {

GammaConfig with_grid(GammaConfig g, int sigma_grid_size) {
    if (sigma_grid_size > 0) g.sigma_grid_size = sigma_grid_size;
    return g;
}

}  // namespace

ConditionVerdict necessary_general(const ProblemSpec& prob, double T, const GammaConfig& g,
                                   int sigma_grid_size) {
    return ConditionEvaluator(prob, with_grid(g, sigma_grid_size))
        .necessary_general(prob.kappa, T);
}

ConditionVerdict necessary_critical(const ProblemSpec& prob, double T, const GammaConfig& g,
                                    int sigma_grid_size) {
    return ConditionEvaluator(prob, with_grid(g, sigma_grid_size))
        .necessary_critical(prob.kappa, T);
}

ConditionVerdict sufficient_subcritical(const ProblemSpec& prob, double T, const GammaConfig& g,
                                        int sigma_grid_size) {
    return ConditionEvaluator(prob, with_grid(g, sigma_grid_size))
        .sufficient_subcritical(prob.kappa, T);
}

ConditionVerdict sufficient_split(const ProblemSpec& prob, double T, const GammaConfig& g,
                                  int sigma_grid_size) {
    return ConditionEvaluator(prob, with_grid(g, sigma_grid_size))
        .sufficient_split(prob.kappa, T);
}

ConditionVerdict sufficient_critical(const ProblemSpec& prob, double T, const GammaConfig& g,
                                     int sigma_grid_size) {
    return ConditionEvaluator(prob, with_grid(g, sigma_grid_size))
        .sufficient_critical(prob.kappa, T);
}

LifespanBound upper_bound_lifespan(const ProblemSpec& prob, const GammaConfig& g) {
    return ConditionEvaluator(prob, g).upper_bound(prob.kappa);
}

LifespanBound lower_bound_lifespan(const ProblemSpec& prob, const GammaConfig& g) {
    return ConditionEvaluator(prob, g).lower_bound(prob.kappa);
}

}  // namespace lifespan
