#include "lifespan/profiles.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "lifespan/quadrature.hpp"

namespace lifespan {

namespace {

double require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
    return v;
}

/// log(e + 1/r) without overflow for tiny r.
double log_e_plus_inv(double r) {
    if (r <= 0.0) return kInf;
    if (r < 1e-4) {
        // log(e + 1/r) = log(1/r) + log(1 + e r)
        return -std::log(r) + std::log1p(M_E * r);
    }
    return std::log(M_E + 1.0 / r);
}

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

InitialProfile InitialProfile::singular_log(double A, double B) {
    require_finite(A, "A");
    require_finite(B, "B");
    if (A < 0.0) throw DomainError("SingularLog requires A >= 0");
    InitialProfile p;
    p.kind = ProfileKind::SingularLog;
    p.A = A;
    p.B = B;
    return p;
}

InitialProfile InitialProfile::power_decay(double A) {
    require_finite(A, "A");
    if (A <= 0.0) throw DomainError("PowerDecay requires A > 0");
    InitialProfile p;
    p.kind = ProfileKind::PowerDecay;
    p.A = A;
    return p;
}

InitialProfile InitialProfile::gaussian_growth(double lambda) {
    require_finite(lambda, "lambda");
    if (lambda <= 0.0) throw DomainError("GaussianGrowth requires lambda > 0");
    InitialProfile p;
    p.kind = ProfileKind::GaussianGrowth;
    p.lambda = lambda;
    return p;
}

InitialProfile InitialProfile::constant(double c) {
    require_finite(c, "c");
    if (c <= 0.0) throw DomainError("Constant requires c > 0");
    InitialProfile p;
    p.kind = ProfileKind::Constant;
    p.c = c;
    return p;
}

bool admissible(const InitialProfile& profile, int N) {
    if (N < 1) throw DomainError("N must be >= 1");
    if (profile.kind != ProfileKind::SingularLog) return true;
    const double A = profile.A, B = profile.B;
    if (A == 0.0) return B > 0.0;
    if (A < N) return true;
    if (A == N) return B > 1.0;
    return false;
}

double eval_radial(const InitialProfile& profile, double r) {
    if (r < 0.0) throw DomainError("radius must be nonnegative");
    switch (profile.kind) {
        case ProfileKind::SingularLog: {
            if (r >= 1.0) return 0.0;
            if (r == 0.0) {
                if (profile.A > 0.0) return kInf;
                // pure log factor: l(0) = inf
                if (profile.B > 0.0) return 0.0;
                return profile.B == 0.0 ? 1.0 : kInf;
            }
            return std::pow(r, -profile.A) * std::pow(log_e_plus_inv(r), -profile.B);
        }
        case ProfileKind::PowerDecay:
            return std::pow(1.0 + r, -profile.A);
        case ProfileKind::Constant:
            return profile.c;
        case ProfileKind::GaussianGrowth:
            throw DomainError("GaussianGrowth is not radial");
    }
    throw DomainError("unknown profile kind");
}

bool is_radial(const InitialProfile& profile) {
    return profile.kind != ProfileKind::GaussianGrowth;
}

double eval_profile(const InitialProfile& profile, std::span<const double> x) {
    if (x.empty()) throw DomainError("point must have at least one coordinate");
    const double xn = x.back();
    if (xn < 0.0) throw DomainError("x_N must be >= 0");
    if (profile.kind == ProfileKind::GaussianGrowth)
        return std::exp(profile.lambda * xn * xn);
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return eval_radial(profile, std::sqrt(r2));
}

double support_radius(const InitialProfile& profile) {
    return profile.kind == ProfileKind::SingularLog ? 1.0 : kInf;
}

double boundary_value(const InitialProfile& profile) {
    switch (profile.kind) {
        case ProfileKind::SingularLog:
            if (profile.A > 0.0) return kInf;
            return profile.B > 0.0 ? 0.0 : (profile.B == 0.0 ? 1.0 : kInf);
        case ProfileKind::PowerDecay: return 1.0;
        case ProfileKind::GaussianGrowth: return 1.0;
        case ProfileKind::Constant: return profile.c;
    }
    throw DomainError("unknown profile kind");
}

OriginExponents origin_exponents(const InitialProfile& profile) {
    if (profile.kind == ProfileKind::SingularLog) return {profile.A, profile.B};
    return {0.0, 0.0};
}

double half_ball_mass(const InitialProfile& profile, double sigma, int N) {
    if (sigma <= 0.0) throw DomainError("sigma must be positive");
    if (N < 1) throw DomainError("N must be >= 1");
    quad::BallQuery q;
    q.profile = profile;
    q.N = N;
    q.kappa = 1.0;
    q.sigma = sigma;
    return quad::ball_integral(q, 0.0);
}

// --- grammar ---------------------------------------------------------------

namespace {

std::map<std::string, double> parse_kv(const std::string& body, const std::string& kind) {
    std::map<std::string, double> out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string::npos) comma = body.size();
        const std::string item = body.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ParseError("profile '" + kind + "': expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(val.c_str(), &end);
        if (val.empty() || end != val.c_str() + val.size())
            throw ParseError("profile '" + kind + "': bad number for '" + key + "'");
        if (!out.emplace(key, v).second)
            throw ParseError("profile '" + kind + "': duplicate key '" + key + "'");
        pos = comma + 1;
    }
    return out;
}

double take(std::map<std::string, double>& kv, const std::string& key, const std::string& kind) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("profile '" + kind + "': missing '" + key + "'");
    const double v = it->second;
    kv.erase(it);
    return v;
}

void expect_empty(const std::map<std::string, double>& kv, const std::string& kind) {
    if (!kv.empty()) throw ParseError("profile '" + kind + "': unknown key '" + kv.begin()->first + "'");
}

}  // namespace

InitialProfile parse_profile(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("profile: expected '<kind>:<params>', got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    auto kv = parse_kv(text.substr(colon + 1), kind);
    if (kind == "singular-log") {
        const double A = take(kv, "A", kind), B = take(kv, "B", kind);
        expect_empty(kv, kind);
        return InitialProfile::singular_log(A, B);
    }
    if (kind == "power-decay") {
        const double A = take(kv, "A", kind);
        expect_empty(kv, kind);
        return InitialProfile::power_decay(A);
    }
    if (kind == "gaussian-growth") {
        const double l = take(kv, "lambda", kind);
        expect_empty(kv, kind);
        return InitialProfile::gaussian_growth(l);
    }
    if (kind == "constant") {
        const double c = take(kv, "c", kind);
        expect_empty(kv, kind);
        return InitialProfile::constant(c);
    }
    throw ParseError("profile: unknown kind '" + kind + "'");
}

std::string format_profile(const InitialProfile& profile) {
    switch (profile.kind) {
        case ProfileKind::SingularLog:
            return "singular-log:A=" + format_num(profile.A) + ",B=" + format_num(profile.B);
        case ProfileKind::PowerDecay:
            return "power-decay:A=" + format_num(profile.A);
        case ProfileKind::GaussianGrowth:
            return "gaussian-growth:lambda=" + format_num(profile.lambda);
        case ProfileKind::Constant:
            return "constant:c=" + format_num(profile.c);
    }
    throw DomainError("unknown profile kind");
}

// --- Orlicz pair and the power-log function --------------------------------

double phi_orlicz(double s, int N) {
    if (s < 0.0) throw DomainError("Phi requires s >= 0");
    if (N < 1) throw DomainError("N must be >= 1");
    if (s == 0.0) return 0.0;
    return s * std::pow(std::log(M_E + s), N);
}

double rho(double s, int N) {
    if (s <= 0.0) throw DomainError("rho requires s > 0");
    if (N < 1) throw DomainError("N must be >= 1");
    return std::pow(s, -N) * std::pow(log_e_plus_inv(s), -N);
}

double phi_inverse(double tau, int N) {
    if (tau < 0.0) throw DomainError("phi_inverse requires tau >= 0");
    if (N < 1) throw DomainError("N must be >= 1");
    if (tau == 0.0) return 0.0;
    // Phi(s) >= s, so the root is <= tau; and Phi is increasing, so
    // s0 = tau / [log(e+tau)]^N has Phi(s0) <= tau.
    double lo = tau / std::pow(std::log(M_E + tau), N);
    double hi = tau;
    double s = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        const double le = std::log(M_E + s);
        const double f = s * std::pow(le, N) - tau;
        if (f > 0.0) hi = s; else lo = s;
        const double df = std::pow(le, N) + s * N * std::pow(le, N - 1) / (M_E + s);
        double next = s - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-15 * s) { s = next; break; }
        s = next;
    }
    return s;
}

double psi_power_log(double tau, const PowerLogSpec& spec) {
    if (spec.a1 <= 0.0) throw DomainError("PowerLogSpec requires a1 > 0");
    if (tau <= 0.0) throw DomainError("Psi requires tau > 0");
    return std::pow(tau, spec.a1) * std::pow(log_e_plus_inv(tau), spec.a2);
}

namespace {

/// Sign factor of Psi'(tau): a1 * log(e + 1/tau) * (1 + e*tau) - a2.
double psi_slope_sign(double tau, const PowerLogSpec& spec) {
    return spec.a1 * log_e_plus_inv(tau) * (1.0 + M_E * tau) - spec.a2;
}

}  // namespace

double psi_monotone_end(const PowerLogSpec& spec) {
    if (spec.a1 <= 0.0) throw DomainError("PowerLogSpec requires a1 > 0");
    // L(1+e*tau) >= 1 on (0, inf), so the derivative never vanishes when
    // a2 <= a1; scan a geometric grid for the first sign change otherwise.
    if (spec.a2 <= spec.a1) return kInf;
    double prev = 1e-12;
    if (psi_slope_sign(prev, spec) <= 0.0) return prev;  // already decreasing at the scan edge
    const double step = std::pow(10.0, 1.0 / 64.0);
    for (double tau = prev * step; tau <= 1e4; tau *= step) {
        if (psi_slope_sign(tau, spec) < 0.0) {
            double lo = prev, hi = tau;
            for (int i = 0; i < 100; ++i) {
                const double mid = std::sqrt(lo * hi);
                (psi_slope_sign(mid, spec) > 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = tau;
    }
    return kInf;
}

double psi_inverse(double target, const PowerLogSpec& spec) {
    if (target <= 0.0) throw DomainError("psi_inverse requires a positive target");
    const double tau1 = psi_monotone_end(spec);
    double hi = std::isfinite(tau1) ? tau1 : 1.0;
    if (!std::isfinite(tau1)) {
        while (psi_power_log(hi, spec) < target) {
            hi *= 2.0;
            if (hi > 1e300) throw DomainError("psi_inverse target out of range");
        }
    } else if (target > psi_power_log(tau1, spec)) {
        throw DomainError("psi_inverse: target above the increasing branch of Psi");
    }
    double lo = hi;
    while (psi_power_log(lo, spec) > target) {
        lo *= 0.5;
        if (lo < 1e-300) throw DomainError("psi_inverse target out of range");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(lo * hi);
        (psi_power_log(mid, spec) < target ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace lifespan
