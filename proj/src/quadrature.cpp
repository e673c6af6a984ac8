#include "lifespan/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <gsl/gsl_sf_gamma.h>

namespace lifespan::quad {

namespace {

/// log(e + e^L) evaluated stably for any L >= 0.
double log_e_plus_exp(double L) {
    return L + std::log1p(std::exp(1.0 - L));
}

double unit_ball_volume(int N) {
    return std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

/// Surface measure of the unit sphere in R^d (d >= 1); S^0 = {+-1} has measure 2.
double sphere_surface(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace

// --- Gauss-Legendre rules ---------------------------------------------------

const GLRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre order must be >= 1");
    static std::mutex mu;
    static std::map<int, GLRule> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GLRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int k = 0; k < n; ++k) {
        // Chebyshev-style initial guess, then Newton on P_n via the recurrence.
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.x[k] = x;
        rule.w[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

double gl_panel(const std::function<double(double)>& f, double a, double b,
                const GLRule& rule) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        sum += rule.w[i] * f(mid + half * rule.x[i]);
    return sum * half;
}

// --- adaptive driver --------------------------------------------------------

namespace {

struct Adapt {
    const std::function<double(double)>& f;
    const GLRule& lo_rule;
    const GLRule& hi_rule;
    double rel_tol;
    double scale;  // magnitude the relative tolerance is measured against
    double err = 0.0;
    bool depth_exhausted = false;

    double run(double a, double b, double eps_abs, int depth) {
        const double hi = gl_panel(f, a, b, hi_rule);
        const double lo = gl_panel(f, a, b, lo_rule);
        const double e = std::abs(hi - lo);
        if (!std::isfinite(e)) {
            // an overflowing panel stays overflowed under subdivision; splitting
            // is only worth a try while the fine rule still reads finite
            if (!std::isfinite(hi) || depth <= 0) return hi;
            const double m = 0.5 * (a + b);
            return run(a, m, 0.5 * eps_abs, depth - 1) + run(m, b, 0.5 * eps_abs, depth - 1);
        }
        if (e <= eps_abs || e <= rel_tol * scale) {
            err += e;
            return hi;
        }
        if (depth <= 0) {
            err += e;
            depth_exhausted = true;
            return hi;
        }
        const double m = 0.5 * (a + b);
        return run(a, m, 0.5 * eps_abs, depth - 1) + run(m, b, 0.5 * eps_abs, depth - 1);
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol, int max_depth) {
    if (!(b >= a)) throw DomainError("integrate: requires a <= b");
    if (a == b) return 0.0;
    Adapt ad{f, gauss_legendre(7), gauss_legendre(15), tol.rel_tol, 0.0};
    ad.scale = std::max(std::abs(gl_panel(f, a, b, gauss_legendre(15))), tol.abs_tol);
    const double result = ad.run(a, b, tol.abs_tol, max_depth);
    if (ad.depth_exhausted) {
        const double allowed = std::max(tol.abs_tol, tol.rel_tol * std::abs(result));
        if (ad.err > allowed)
            throw AccuracyError("integrate: tolerance not reached", ad.err);
    }
    return result;
}

double integrate_pieces(const std::function<double(double)>& f, double a, double b,
                        std::span<const double> breaks, const Tolerance& tol) {
    if (!(b >= a)) throw DomainError("integrate_pieces: requires a <= b");
    std::vector<double> cuts{a, b};
    for (double c : breaks)
        if (c > a && c < b) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    Tolerance piece_tol{tol.abs_tol / std::max<std::size_t>(1, cuts.size() - 1), tol.rel_tol};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate(f, cuts[i], cuts[i + 1], piece_tol);
    return total;
}

// --- singular ladder --------------------------------------------------------

bool head_divergent(double s, double q) {
    return s < 0.0 || (s == 0.0 && q <= 1.0);
}

double integrate_singular(const SingularIntegrand& f, double b, const Tolerance& tol,
                          std::span<const double> breaks) {
    if (!(b > 0.0)) throw DomainError("integrate_singular: requires b > 0");
    if (head_divergent(f.s, f.q)) return kInf;

    // Moderate region: unit log panels on [b e^{-U}, b].
    constexpr int kLogPanels = 36;
    double total = 0.0;
    Tolerance panel_tol{tol.abs_tol / (2 * kLogPanels), tol.rel_tol};
    double hi = b;
    for (int k = 0; k < kLogPanels; ++k) {
        const double lo = b * std::exp(-(k + 1.0));
        total += integrate_pieces(f.h, lo, hi, breaks, panel_tol);
        hi = lo;
    }

    // Deep region in L = log(1/r): doubling panels of h_log from L0 on.
    const double L0 = kLogPanels - std::log(b);
    const GLRule& rule = gauss_legendre(15);
    double width = 1.0, left = L0;
    int quiet = 0;
    for (int k = 0; k < 400 && quiet < 2; ++k) {
        const double piece = gl_panel(f.h_log, left, left + width, rule);
        total += piece;
        left += width;
        width *= 2.0;
        const double allowed = std::max(tol.abs_tol / 16, 0.01 * tol.rel_tol * std::abs(total));
        quiet = std::abs(piece) <= allowed ? quiet + 1 : 0;
    }
    return total;
}

// --- half-ball geometry -----------------------------------------------------

double half_ball_measure(double d, double sigma, int N) {
    if (d < 0.0) throw DomainError("half_ball_measure: center height must be >= 0");
    if (sigma <= 0.0) throw DomainError("half_ball_measure: sigma must be > 0");
    if (N < 1) throw DomainError("half_ball_measure: N must be >= 1");
    const double full = unit_ball_volume(N) * std::pow(sigma, N);
    if (d >= sigma) return full;
    const double x = 1.0 - (d / sigma) * (d / sigma);
    const double cap = 0.5 * full * gsl_sf_beta_inc(0.5 * (N + 1), 0.5, x);
    return full - cap;
}

namespace {

struct Window {
    double ulo = 0.0, uhi = 1.0;  // in u = cos(theta)
    bool empty = false;
};

/// Admissible cos(theta) range at origin-distance r for the half-ball around
/// height x with radius sigma, intersected with the slab sa <= y_N < sb.
Window cos_window(double r, double x, double sigma, double sa, double sb) {
    Window w;
    if (r <= 0.0) {
        w.empty = (x >= sigma) || (sa > 0.0);
        return w;
    }
    if (x > 0.0) {
        const double c = (r * r + x * x - sigma * sigma) / (2.0 * r * x);
        w.ulo = std::max(w.ulo, c);
    } else if (r > sigma) {
        w.empty = true;
        return w;
    }
    if (sa > 0.0) w.ulo = std::max(w.ulo, sa / r);
    if (std::isfinite(sb)) w.uhi = std::min(w.uhi, sb / r);
    if (w.ulo >= w.uhi) w.empty = true;
    return w;
}

/// Integrand factored as pref * R(|y|) * V(y_N); RL is the exact value of
/// e^{-N L} R(e^{-L}) written through L so the deep head never under/overflows.
struct Factored {
    std::function<double(double)> R;
    std::function<double(double)> V;   // empty = identically 1
    std::function<double(double)> RL;
    double pref = 1.0;
    double s = 1.0;  // RL ~ C e^{-sL} L^{-q}
    double q = 0.0;
    bool singular = false;
};

Factored make_factored(const BallQuery& que) {
    Factored f;
    const InitialProfile& pr = que.profile;
    const int N = que.N;

    if (pr.kind == ProfileKind::GaussianGrowth) {
        f.R = [](double) { return 1.0; };
        f.RL = [N](double L) { return std::exp(-N * L); };
        f.s = N;
        if (que.kind == IntegrandKind::PlainPower) {
            f.pref = std::pow(que.kappa, que.power);
            const double expo = que.power * pr.lambda - que.gauss_lambda;
            f.V = [expo](double y) { return std::exp(expo * y * y); };
        } else {
            const double scale = que.orlicz_scale, lam = pr.lambda;
            f.V = [scale, lam, N](double y) {
                return phi_orlicz(scale * std::exp(lam * y * y), N);
            };
        }
        return f;
    }

    // Radial kinds.
    if (que.kind == IntegrandKind::PlainPower) {
        const double kp = que.kappa, a = que.power;
        f.R = [pr, kp, a](double r) { return std::pow(kp * eval_radial(pr, r), a); };
        if (pr.kind == ProfileKind::SingularLog) {
            const double A = pr.A, B = pr.B, c = std::pow(kp, a);
            f.RL = [A, B, a, c, N](double L) {
                const double lL = log_e_plus_exp(L);
                return c * std::exp((a * A - N) * L) * std::pow(lL, -a * B);
            };
            f.s = N - a * A;
            f.q = a * B;
            f.singular = A > 0.0 || B < 0.0;
        } else {
            f.RL = [fR = f.R, N](double L) { return std::exp(-N * L) * fR(std::exp(-L)); };
            f.s = N;
        }
    } else {
        const double scale = que.orlicz_scale;
        const int ON = N;
        f.R = [pr, scale, ON](double r) { return phi_orlicz(scale * eval_radial(pr, r), ON); };
        if (pr.kind == ProfileKind::SingularLog) {
            const double A = pr.A, B = pr.B, logc = std::log(scale);
            f.RL = [A, B, logc, N](double L) {
                const double lL = log_e_plus_exp(L);
                const double logX = logc + A * L - B * std::log(lL);
                const double lepX = logX > 40.0 ? logX : std::log(M_E + std::exp(logX));
                return std::exp(logc + (A - N) * L - B * std::log(lL)) * std::pow(lepX, N);
            };
            f.s = N - A;
            f.q = B - N;
            f.singular = A > 0.0 || B < 0.0;
        } else {
            f.RL = [fR = f.R, N](double L) { return std::exp(-N * L) * fR(std::exp(-L)); };
            f.s = N;
        }
    }
    if (que.gauss_lambda != 0.0) {
        const double gl = que.gauss_lambda;
        f.V = [gl](double y) { return std::exp(-gl * y * y); };
    }
    return f;
}

void validate_query(const BallQuery& q, double center) {
    if (q.N < 1) throw DomainError("ball query: N must be >= 1");
    if (!(q.sigma > 0.0)) throw DomainError("ball query: sigma must be > 0");
    if (!(q.kappa > 0.0)) throw DomainError("ball query: kappa must be > 0");
    if (!(q.power > 0.0)) throw DomainError("ball query: power must be > 0");
    if (q.kind == IntegrandKind::Orlicz && !(q.orlicz_scale > 0.0))
        throw DomainError("ball query: Orlicz scale must be > 0");
    if (q.slab_above < 0.0) throw DomainError("ball query: slab_above must be >= 0");
    if (center < 0.0) throw DomainError("ball query: center must be >= 0");
}

}  // namespace

double ball_integral(const BallQuery& q, double center) {
    validate_query(q, center);
    const int N = q.N;
    Factored fac = make_factored(q);
    const double sa = q.slab_above, sb = q.slab_below;

    double r_lo = std::max(0.0, center - q.sigma);
    double r_hi = center + q.sigma;
    const double supp = support_radius(q.profile);
    if (std::isfinite(supp)) r_hi = std::min(r_hi, supp);
    r_lo = std::max(r_lo, sa);
    if (N == 1 && std::isfinite(sb)) r_hi = std::min(r_hi, sb);
    if (r_hi <= r_lo) return 0.0;

    // Angular integral at distance r (trivial indicator * V for N = 1).
    const GLRule* inner_rule = N >= 2 ? &gauss_legendre(32) : nullptr;
    const double x = center, sigma = q.sigma;
    auto inner = [&, N](double r) -> double {
        if (N == 1) {
            // windows already folded into the r-range
            return fac.V ? fac.V(r) : 1.0;
        }
        const Window w = cos_window(r, x, sigma, sa, sb);
        if (w.empty) return 0.0;
        const double th_lo = std::acos(std::min(1.0, w.uhi));
        const double th_hi = std::acos(std::max(0.0, w.ulo));
        if (!(th_hi > th_lo)) return 0.0;
        auto g = [&](double th) {
            const double s = std::sin(th);
            const double angular = N == 2 ? 1.0 : std::pow(s, N - 2);
            return (fac.V ? fac.V(r * std::cos(th)) : 1.0) * angular;
        };
        return gl_panel(g, th_lo, th_hi, *inner_rule);
    };

    const double spref = fac.pref * (N >= 2 ? sphere_surface(N - 1) : 1.0);
    auto h = [&, N](double r) {
        const double measure = N >= 2 ? std::pow(r, N - 1) : 1.0;
        return spref * measure * fac.R(r) * inner(r);
    };

    std::vector<double> cuts;
    for (double c : {std::abs(center - sigma), center + sigma, sa, std::isfinite(sb) ? sb : -1.0,
                     std::isfinite(supp) ? supp : -1.0})
        if (c > r_lo && c < r_hi) cuts.push_back(c);

    if (r_lo == 0.0 && fac.singular) {
        if (head_divergent(fac.s, fac.q)) return kInf;
        SingularIntegrand si;
        si.h = h;
        si.h_log = [&](double L) { return spref * fac.RL(L) * inner(std::exp(-L)); };
        si.s = fac.s;
        si.q = fac.q;
        return integrate_singular(si, r_hi, q.tol, cuts);
    }
    return integrate_pieces(h, r_lo, r_hi, cuts, q.tol);
}

double ball_average(const BallQuery& q, double center) {
    const double integral = ball_integral(q, center);
    return integral / half_ball_measure(center, q.sigma, q.N);
}

// --- axis maximization ------------------------------------------------------

SupResult maximize_on_axis(const std::function<double(double)>& f, double sigma,
                           double support_hint, const AxisSearchPolicy& policy,
                           double lo, double hi) {
    if (!(sigma > 0.0)) throw DomainError("maximize_on_axis: sigma must be > 0");
    if (!(hi > lo)) throw DomainError("maximize_on_axis: empty center range");

    double extent = policy.extent;
    if (extent <= 0.0) {
        extent = std::isfinite(support_hint) ? std::max(4.0 * sigma, support_hint + sigma)
                                             : 16.0 * sigma;
    }
    const bool bounded = std::isfinite(hi);
    const double top_limit = bounded ? lo + (hi - lo) * (1.0 - 1e-12) : lo + extent;

    std::vector<double> pts{lo};
    for (double off = sigma / 64.0; lo + off < top_limit; off *= 2.0) pts.push_back(lo + off);
    pts.push_back(top_limit);

    std::vector<double> vals(pts.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        vals[i] = f(pts[i]);
        if (std::isinf(vals[i])) return {vals[i], pts[i], false};
        if (vals[i] > vals[best]) best = i;
    }

    // Heuristic escape test: still gaining at the top of an unbounded ladder.
    if (!bounded && pts.size() >= 4 && best == pts.size() - 1) {
        const std::size_t n = pts.size();
        const bool rising = vals[n - 1] > vals[n - 2] && vals[n - 2] > vals[n - 3] &&
                            vals[n - 3] > vals[n - 4];
        if (rising && vals[n - 1] >= (1.0 + 1e-3) * vals[n - 2])
            return {vals[n - 1], pts[n - 1], true};
    }

    // Golden-section refinement around the best sample.
    double a = best > 0 ? pts[best - 1] : pts[best];
    double b = best + 1 < pts.size() ? pts[best + 1] : pts[best];
    double bx = pts[best], bv = vals[best];
    if (b > a) {
        constexpr double kGold = 0.6180339887498949;
        double x1 = b - kGold * (b - a), x2 = a + kGold * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int i = 0; i < policy.golden_iters; ++i) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + kGold * (b - a);
                f2 = f(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - kGold * (b - a);
                f1 = f(x1);
            }
        }
        if (f1 > bv) { bv = f1; bx = x1; }
        if (f2 > bv) { bv = f2; bx = x2; }
    }
    return {bv, bx, false};
}

SupResult sup_average_over_centers(const BallQuery& q, const AxisSearchPolicy& policy) {
    auto f = [&q](double x) { return ball_average(q, x); };
    return maximize_on_axis(f, q.sigma, support_radius(q.profile), policy);
}

}  // namespace lifespan::quad
