#include "lifespan/volterra.hpp"

#include <algorithm>
#include <cmath>

#include "lifespan/kernel.hpp"
#include "lifespan/parallel.hpp"

namespace lifespan {

namespace {

constexpr double kInvSqrtPi = 0.5641895835477563;

/// Kernel moments of one history segment [a, b] against target t >= b:
///   m0 = int_a^b (t-s)^{-1/2} ds,  m1 = int_a^b (t-s)^{-1/2} (s-a) ds,
/// with alpha - beta formed as h/(alpha+beta) so nearby segments don't cancel.
struct Moments {
    double wl, wr;  // weights on v(a) and v(b) for piecewise-linear v
};

Moments segment_moments(double a, double b, double t) {
    const double h = b - a;
    const double alpha = std::sqrt(t - a), beta = std::sqrt(t - b);
    const double diff = h / (alpha + beta);
    const double m0 = 2.0 * diff;
    const double m1 = (2.0 / 3.0) * diff * (2.0 * (t - a) - alpha * beta - (t - b));
    return {m0 - m1 / h, m1 / h};
}

struct March {
    March(const ProblemSpec& pr, const StepPolicy& po, double cap)
        : prob(pr), pol(po), rel_cap(cap) {}

    const ProblemSpec& prob;
    const StepPolicy& pol;
    double rel_cap;

    std::vector<double> t, w, v;  // accepted grid; v = w^p
    double tail_mass = 0.0;       // analytic head deeper than the stored grid
    double s_min = 0.0;
    bool head_truncated = false;
    bool blew_up = false;
    std::string stop;
    std::size_t head_nodes = 0;

    double t_gauss = kInf;  // F itself blows up here (GaussianGrowth data)

    double F(double tt) const {
        const double origin[1] = {0.0};
        return free_propagate(prob.profile, prob.kappa, origin, tt, 1, pol.quad_tol);
    }

    /// Duhamel sum over all stored segments against a target > t.back()
    /// (equality allowed: the closing segment has a vanishing end moment).
    double duhamel(double target) const {
        const std::size_t n = t.size();
        double sum = n < 2 ? 0.0 : par::blocked_sum(n - 1, [&](std::size_t k) {
            const Moments m = segment_moments(t[k], t[k + 1], target);
            return m.wl * v[k] + m.wr * v[k + 1];
        });
        if (tail_mass > 0.0) sum += tail_mass / std::sqrt(target - s_min);
        return kInvSqrtPi * sum;
    }

    void seed_plain(double w0) {
        t.assign(1, 0.0);
        w.assign(1, w0);
        v.assign(1, std::pow(w0, prob.p.value));
    }

    void fill_head(double t1) {
        constexpr int kPerDecade = 24, kDecades = 12;
        const int n = kPerDecade * kDecades + 1;
        t.resize(n);
        w.resize(n);
        v.resize(n);
        for (int j = 0; j < n; ++j) {
            const double s = t1 * std::pow(10.0, -double(kDecades) * (1.0 - j / (n - 1.0)));
            t[j] = s;
            w[j] = F(s);
            v[j] = std::pow(w[j], prob.p.value);
        }
        s_min = t[0];
        const double A = prob.profile.kind == ProfileKind::SingularLog ? prob.profile.A : 0.0;
        const double mu_v = prob.p.value * A / 2.0;
        if (mu_v < 1.0) {
            tail_mass = v[0] * s_min / (1.0 - mu_v);
        } else {
            tail_mass = 0.0;
            head_truncated = true;
        }
        head_nodes = t.size();
    }

    /// Head grid with w ~ F, valid while the Duhamel correction stays small;
    /// shrinks the span until it is, then folds the correction into the last
    /// node so marching starts from the corrected value.
    void seed_head(double t1_init) {
        double t1 = t1_init;
        for (int tries = 0;; ++tries) {
            head_truncated = false;
            fill_head(t1);
            const double correction = duhamel(t.back());
            if (correction <= 0.02 * w.back()) break;
            if (tries >= 8) {
                head_truncated = true;
                break;
            }
            t1 *= 1e-2;
        }
        w.back() += duhamel(t.back());
        v.back() = std::pow(w.back(), prob.p.value);
    }

    /// Smaller root of w - c w^p = R (the minimal-solution branch);
    /// empty when the parabola-like g never reaches zero.
    std::optional<double> implicit_step(double R, double c) const {
        const double p = prob.p.value;
        const double wstar = std::pow(c * p, -1.0 / (p - 1.0));
        if (wstar * (1.0 - 1.0 / p) <= R) return std::nullopt;
        double lo = R, hi = wstar;
        double x = std::min(R + c * std::pow(R, p), wstar);  // Picard start
        for (int i = 0; i < 80; ++i) {
            const double g = x - c * std::pow(x, p) - R;
            (g < 0.0 ? lo : hi) = x;
            const double dg = 1.0 - c * p * std::pow(x, p - 1.0);
            double nx = dg > 0.0 ? x - g / dg : 0.5 * (lo + hi);
            if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
            if (std::abs(nx - x) <= 1e-15 * x) return nx;
            x = nx;
        }
        return x;
    }

    void run() {
        if (prob.N != 1)
            throw InapplicableError("boundary-trace marching is implemented for N = 1 only");
        const double p = prob.p.value;
        if (prob.profile.kind == ProfileKind::GaussianGrowth)
            t_gauss = 1.0 / (4.0 * prob.profile.lambda);

        const bool singular_start =
            prob.profile.kind == ProfileKind::SingularLog || pol.t_start > 0.0;
        if (singular_start) {
            const double t1 = pol.t_start > 0.0 ? pol.t_start : pol.head_span * 1e-4;
            seed_head(t1);
        } else {
            seed_plain(prob.kappa * boundary_value(prob.profile));
        }

        double dt = (9.0 * M_PI / 16.0) * rel_cap * rel_cap *
                    std::pow(w.back(), 2.0 * (1.0 - p));
        dt = std::min(dt, 1e-3 * pol.horizon);
        if (t.back() > 0.0) dt = std::min(dt, pol.dt_cap_frac * t.back());

        // Large singular data starts above any absolute threshold while the
        // free part still decays; blow-up means rising well past the running
        // minimum, not merely being large.
        const double w_stop = pol.bracket_factor * pol.blowup_threshold;
        double w_floor = *std::min_element(w.begin(), w.end());
        std::size_t steps = 0;
        while (true) {
            if (t.back() >= pol.horizon) {
                stop = "horizon";
                return;
            }
            if (steps >= pol.max_steps) {
                stop = "max-steps";
                return;
            }
            double dt_try = dt;
            if (t.back() > 0.0) dt_try = std::min(dt_try, pol.dt_cap_frac * t.back());
            if (std::isfinite(t_gauss)) {
                const double remaining = t_gauss - t.back();
                if (remaining <= 1e-13 * t_gauss) {
                    stop = "linear-blowup";
                    return;
                }
                dt_try = std::min(dt_try, 0.2 * remaining);
            }
            if (dt_try < std::max(1e-300, 1e-15 * t.back())) {
                stop = "dt-underflow";
                return;
            }
            const double target = t.back() + dt_try;
            if (target == t.back()) {
                stop = "dt-underflow";
                return;
            }

            const double h = target - t.back();
            const double R = F(target) + duhamel(target) +
                             kInvSqrtPi * (2.0 / 3.0) * std::sqrt(h) * v.back();
            const double c = kInvSqrtPi * (4.0 / 3.0) * std::sqrt(h);
            const auto next = implicit_step(R, c);
            if (!next) {
                dt = 0.4 * dt_try;
                continue;
            }
            const double relabs = std::abs(*next - w.back()) / w.back();
            if (relabs > rel_cap) {
                dt = dt_try * std::max(0.3, 0.5 * rel_cap / relabs);
                continue;
            }

            const double w_prev = w.back();
            t.push_back(target);
            w.push_back(*next);
            v.push_back(std::pow(*next, p));
            ++steps;
            w_floor = std::min(w_floor, *next);
            if (*next >= std::max(w_stop, 100.0 * w_floor) && *next > w_prev) {
                stop = "threshold";
                blew_up = true;
                return;
            }
            dt = dt_try * std::clamp(0.9 * rel_cap / std::max(relabs, rel_cap / 8.0), 0.3,
                                     pol.growth_cap);
        }
    }
};

TraceSolution march_level(const ProblemSpec& prob, const StepPolicy& pol, int level) {
    StepPolicy lp = pol;
    // Refine the ramp cap too, else the early log-t grid density never
    // improves and crossing-time checkpoints stall near dt_cap_frac^2 error.
    lp.dt_cap_frac = pol.dt_cap_frac * std::pow(2.0, -level);
    March m(prob, lp, pol.max_rel_step * std::pow(2.0, -level));
    m.run();
    TraceSolution out;
    out.t = std::move(m.t);
    out.w = std::move(m.w);
    out.blew_up = m.blew_up;
    out.head_truncated = m.head_truncated;
    out.stop_reason = std::move(m.stop);
    return out;
}

struct RateFit {
    double T = 0.0;
    bool ok = false;
};

/// Weighted least squares of z = w^{-2(p-1)} ~ a - b (t - t_ref): near the
/// blow-up of w ~ C (T-t)^{-1/(2(p-1))} this is exactly linear with root T.
RateFit rate_fit(const TraceSolution& tr, double p, std::size_t iend, int window) {
    RateFit fit;
    if (iend + 1 < 4 || iend >= tr.t.size()) return fit;
    const std::size_t i0 = iend + 1 >= static_cast<std::size_t>(window) ? iend + 1 - window : 0;
    if (iend - i0 + 1 < 4) return fit;

    const double tref = tr.t[iend];
    const double expo = -2.0 * (p - 1.0);
    double wgt_max = 0.0;
    std::vector<double> zs(iend - i0 + 1), taus(iend - i0 + 1), wgts(iend - i0 + 1);
    for (std::size_t i = i0; i <= iend; ++i) {
        const double z = std::pow(tr.w[i], expo);
        zs[i - i0] = z;
        taus[i - i0] = tr.t[i] - tref;
        wgts[i - i0] = 1.0 / (z * z);
        wgt_max = std::max(wgt_max, wgts[i - i0]);
    }
    double S0 = 0, S1 = 0, S2 = 0, Sz = 0, Szt = 0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double g = wgts[i] / wgt_max;
        S0 += g;
        S1 += g * taus[i];
        S2 += g * taus[i] * taus[i];
        Sz += g * zs[i];
        Szt += g * zs[i] * taus[i];
    }
    // Normal equations of z = a - b tau.
    const double det = S1 * S1 - S0 * S2;
    if (det == 0.0) return fit;
    const double a = (S1 * Szt - S2 * Sz) / det;
    const double b = (S0 * Szt - S1 * Sz) / det;
    if (!(b > 0.0)) return fit;
    const double T = tref + a / b;
    if (!std::isfinite(T) || !(T > tr.t.back())) return fit;
    fit.T = T;
    fit.ok = true;
    return fit;
}

/// Time at which the trace first reaches level wc scanning from `start`,
/// log-log interpolated.
double crossing_time(const TraceSolution& tr, double wc, std::size_t start) {
    std::size_t i = start;
    while (i < tr.w.size() && tr.w[i] < wc) ++i;
    if (i >= tr.w.size()) return tr.t.back();
    if (i == start || !(tr.t[i - 1] > 0.0) || !(tr.w[i] > tr.w[i - 1])) return tr.t[i];
    const double th =
        (std::log(wc) - std::log(tr.w[i - 1])) / (std::log(tr.w[i]) - std::log(tr.w[i - 1]));
    return std::exp(std::log(tr.t[i - 1]) + th * (std::log(tr.t[i]) - std::log(tr.t[i - 1])));
}

std::size_t argmin_w(const TraceSolution& tr) {
    return static_cast<std::size_t>(std::min_element(tr.w.begin(), tr.w.end()) - tr.w.begin());
}

/// Worst relative disagreement of the times at which two traces cross 8
/// geometric w-levels on the rising branch (traces with singular data dip
/// first).  The ladder starts at twice the dip: crossing times right at the
/// dip are ill-conditioned (dw/dt -> 0), and comparing phases instead of
/// values keeps the test meaningful next to the blow-up, where w(t) is
/// violently sensitive to t.
double checkpoint_diff(const TraceSolution& a, const TraceSolution& b) {
    const std::size_t sa = argmin_w(a), sb = argmin_w(b);
    const double w_lo = std::max(a.w[sa], b.w[sb]) * 2.0;
    const double w_hi = std::min(a.w.back(), b.w.back()) / 1.05;
    if (!(w_hi > w_lo)) return kInf;
    double worst = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double wc = w_lo * std::pow(w_hi / w_lo, j / 7.0);
        const double ta = crossing_time(a, wc, sa), tb = crossing_time(b, wc, sb);
        worst = std::max(worst, std::abs(ta - tb) / std::max(ta, tb));
    }
    return worst;
}

struct LevelEstimate {
    bool fit_ok = false;
    double T_est = 0.0, spread = 0.0, t_last = 0.0;
    std::size_t steps = 0;
    std::string stop;
};

LevelEstimate analyze(const TraceSolution& tr, const ProblemSpec& prob, const StepPolicy& pol) {
    LevelEstimate le;
    le.steps = tr.t.size();
    le.stop = tr.stop_reason;
    le.t_last = tr.t.back();

    const std::size_t last = tr.t.size() - 1;
    const RateFit f2 = rate_fit(tr, prob.p.value, last, pol.rate_fit_window);
    // Second window one bracket below the stop level, scanned on the rising
    // branch so decaying singular heads never capture it.
    const std::size_t im = argmin_w(tr);
    const double level1 =
        std::max(pol.blowup_threshold, 100.0 * tr.w[im] / pol.bracket_factor);
    std::size_t i1 = last;
    for (std::size_t i = im; i < tr.w.size(); ++i)
        if (tr.w[i] >= level1) {
            i1 = i;
            break;
        }
    if (i1 == last && last > static_cast<std::size_t>(pol.rate_fit_window) / 2)
        i1 = last - pol.rate_fit_window / 2;
    const RateFit f1 = rate_fit(tr, prob.p.value, i1, pol.rate_fit_window);

    if (f2.ok) {
        le.T_est = f2.T;
        le.spread = f1.ok ? std::abs(f2.T - f1.T) : 1e-3 * f2.T;
        le.fit_ok = true;
    } else if (f1.ok) {
        le.T_est = f1.T;
        le.spread = 1e-3 * f1.T;
        le.fit_ok = true;
    }
    return le;
}

}  // namespace

TraceSolution solve_boundary_trace(const ProblemSpec& prob, const StepPolicy& policy) {
    prob.validate();
    return march_level(prob, policy, 0);
}

BlowupEstimate estimate_blowup_time(const ProblemSpec& prob, const StepPolicy& policy) {
    prob.validate();
    BlowupEstimate est;

    TraceSolution prev;
    LevelEstimate prev_le;
    for (int level = 0; level <= policy.max_refinements; ++level) {
        TraceSolution tr = march_level(prob, policy, level);
        if (tr.stop_reason == "horizon" || tr.stop_reason == "max-steps") {
            est.method = BlowupMethod::GridExhausted;
            est.T_lo = tr.t.back();
            est.T_hi = kInf;
            est.steps = tr.t.size();
            est.refinements = level;
            est.detail = tr.stop_reason;
            return est;
        }
        LevelEstimate le = analyze(tr, prob, policy);
        if (!le.fit_ok) {
            est.method = BlowupMethod::GridExhausted;
            est.T_lo = tr.t.back();
            est.T_hi = kInf;
            est.steps = le.steps;
            est.refinements = level;
            est.detail = le.stop + " (rate fit failed)";
            return est;
        }

        bool converged = false;
        if (level > 0 && prev_le.fit_ok) {
            const double dT = std::abs(le.T_est - prev_le.T_est) / le.T_est;
            converged = std::max(dT, checkpoint_diff(prev, tr)) < policy.checkpoint_rtol;
        }

        est.method = BlowupMethod::ThresholdRateFit;
        est.T_est = le.T_est;
        est.T_lo = std::max(le.t_last, le.T_est - le.spread);
        if (est.T_lo >= le.T_est) est.T_lo = le.t_last;
        est.T_hi = le.T_est + std::max(le.spread, 1e-9 * le.T_est);
        est.steps = le.steps;
        est.refinements = level;
        est.detail = le.stop;
        if (converged) return est;
        prev = std::move(tr);
        prev_le = le;
    }
    est.detail += " (checkpoints unconverged)";
    return est;
}

}  // namespace lifespan
