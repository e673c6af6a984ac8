#include "lifespan/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "lifespan/parallel.hpp"

namespace lifespan {

std::string format_source(SweepSource s) {
    switch (s) {
        case SweepSource::Volterra: return "volterra";
        case SweepSource::UpperBound: return "upper-bound";
        case SweepSource::LowerBound: return "lower-bound";
    }
    throw DomainError("format_source: unknown source");
}

SweepSource parse_source(const std::string& text) {
    if (text == "volterra") return SweepSource::Volterra;
    if (text == "upper-bound") return SweepSource::UpperBound;
    if (text == "lower-bound") return SweepSource::LowerBound;
    throw ParseError("source must be volterra | upper-bound | lower-bound");
}

std::vector<double> geometric_kappas(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("kappa range needs 0 < lo < hi");
    if (count < 2) throw DomainError("kappa grid needs at least 2 points");
    std::vector<double> ks(count);
    for (int i = 0; i < count; ++i) ks[i] = lo * std::pow(hi / lo, i / (count - 1.0));
    return ks;
}

namespace {

/// Fit coordinates per law: X from kappa, Y from T, straight line expected.
///   PowerLaw           (log k, log T)                       slope e
///   PowerLogLaw        (log[k (log k)^{-q}], log T)         slope e
///   LogLifespanLarge   (log k, log |log T|)                 slope  r
///   LogLifespanSmall   (log k, log log T)                   slope -r
///   PowerOverLogSmall  (log[k^{-1}/log k^{-1}], log T)      slope e
std::optional<std::pair<double, double>> fit_coords(const ScalingLaw& law, double kappa,
                                                    double T) {
    if (!(kappa > 0.0) || !(T > 0.0)) return std::nullopt;
    const double lk = std::log(kappa);
    switch (law.variant) {
        case LawVariant::PowerLaw:
            return std::pair{lk, std::log(T)};
        case LawVariant::PowerLogLaw: {
            if (!(lk > 0.0)) return std::nullopt;
            return std::pair{lk - law.q * std::log(lk), std::log(T)};
        }
        case LawVariant::LogLifespanLarge: {
            const double alt = std::abs(std::log(T));
            if (!(alt > 0.0)) return std::nullopt;
            return std::pair{lk, std::log(alt)};
        }
        case LawVariant::LogLifespanSmall: {
            if (!(T > 1.0)) return std::nullopt;
            return std::pair{lk, std::log(std::log(T))};
        }
        case LawVariant::PowerOverLogSmall: {
            if (!(kappa < 1.0)) return std::nullopt;
            const double li = std::log(1.0 / kappa);
            if (!(li > 0.0)) return std::nullopt;
            return std::pair{std::log(1.0 / kappa / li), std::log(T)};
        }
        default:
            return std::nullopt;
    }
}

}  // namespace

FitResult fit_law(const std::vector<SweepPoint>& points, const ScalingLaw& law) {
    std::vector<double> xs, ys;
    for (const SweepPoint& pt : points) {
        if (!pt.ok) throw DomainError("fit_law: all points must carry estimates");
        const auto c = fit_coords(law, pt.kappa, pt.T_hat);
        if (!c) throw DomainError("fit_law: point outside the law's fit coordinates");
        xs.push_back(c->first);
        ys.push_back(c->second);
    }
    const std::size_t n = xs.size();
    if (n < 2) throw DomainError("fit_law: need at least 2 points");

    double xm = 0, ym = 0;
    for (std::size_t i = 0; i < n; ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= n;
    ym /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xm) * (xs[i] - xm);
        sxy += (xs[i] - xm) * (ys[i] - ym);
        syy += (ys[i] - ym) * (ys[i] - ym);
    }
    if (sxx == 0.0) throw DomainError("fit_law: degenerate abscissa");

    FitResult fr;
    fr.exponent = sxy / sxx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - ym - fr.exponent * (xs[i] - xm);
        ss_res += r * r;
    }
    fr.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fr.stderr_ = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : kInf;
    return fr;
}

SweepResult run_sweep(const ProblemSpec& base, const std::vector<double>& kappas,
                      SweepSource source, Regime regime, const SweepConfig& cfg) {
    base.validate();
    if (kappas.empty()) throw DomainError("run_sweep: empty kappa grid");
    for (double k : kappas)
        if (!(k > 0.0)) throw DomainError("run_sweep: kappa values must be > 0");
    if (cfg.jobs > 0) par::set_thread_count(cfg.jobs);

    SweepResult res;
    res.predicted = cfg.expected_override
                        ? *cfg.expected_override
                        : predict(base.N, base.p, base.profile, regime);

    res.points.resize(kappas.size());
    if (source == SweepSource::Volterra) {
        par::parallel_for(kappas.size(), [&](std::size_t i) {
            SweepPoint& pt = res.points[i];
            pt.kappa = kappas[i];
            pt.source = source;
            try {
                ProblemSpec ps = base;
                ps.kappa = kappas[i];
                const BlowupEstimate be = estimate_blowup_time(ps, cfg.step);
                if (be.T_est) {
                    pt.T_hat = *be.T_est;
                    pt.ok = true;
                } else {
                    pt.reason = be.detail;
                }
            } catch (const std::exception& e) {
                pt.reason = e.what();
            }
        });
    } else {
        ConditionEvaluator ev(base, cfg.gammas);
        for (std::size_t i = 0; i < kappas.size(); ++i) {
            SweepPoint& pt = res.points[i];
            pt.kappa = kappas[i];
            pt.source = source;
            const LifespanBound b = source == SweepSource::UpperBound
                                        ? ev.upper_bound(kappas[i])
                                        : ev.lower_bound(kappas[i]);
            switch (b.kind) {
                case BoundKind::Value:
                    pt.T_hat = b.T;
                    pt.ok = true;
                    break;
                case BoundKind::Zero:
                    pt.reason = "condition fails at the bottom of the T grid";
                    break;
                case BoundKind::UnboundedOnGrid:
                    pt.reason = "condition still holds at the top of the T grid";
                    break;
            }
        }
    }

    if (res.predicted.variant == LawVariant::FiniteLimit) {
        res.tolerance = cfg.finite_limit_rtol;
        const auto it = std::min_element(
            res.points.begin(), res.points.end(),
            [](const SweepPoint& a, const SweepPoint& b) { return a.kappa < b.kappa; });
        if (it->ok && res.predicted.value > 0.0) {
            const double rel = std::abs(it->T_hat - res.predicted.value) / res.predicted.value;
            res.verdict = rel <= cfg.finite_limit_rtol ? SweepVerdict::Match
                                                       : SweepVerdict::Mismatch;
        }
        return res;
    }

    const auto expected = exponent_of(res.predicted);
    if (!expected) return res;  // nothing quantitative to fit against

    std::vector<SweepPoint> usable;
    for (const SweepPoint& pt : res.points)
        if (pt.ok && fit_coords(res.predicted, pt.kappa, pt.T_hat)) usable.push_back(pt);
    if (usable.size() < 4) return res;

    const FitResult fr = fit_law(usable, res.predicted);
    res.fitted_exponent = fr.exponent;
    res.fit_stderr = fr.stderr_;
    res.r_squared = fr.r_squared;
    res.tolerance = std::max(cfg.match_rel_tol * std::abs(*expected), cfg.match_abs_tol);
    const bool slope_ok = std::abs(fr.exponent - *expected) <= res.tolerance;
    const bool shape_ok = fr.r_squared >= cfg.min_r_squared;
    res.verdict = (slope_ok && shape_ok) ? SweepVerdict::Match : SweepVerdict::Mismatch;
    return res;
}

}  // namespace lifespan
