#include "lifespan/predictor.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "lifespan/rational.hpp"

namespace lifespan {

// --- Exponent ---------------------------------------------------------------

bool near_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

Exponent Exponent::from_double(double p) {
    if (!std::isfinite(p) || !(p > 1.0)) throw DomainError("exponent p must be > 1");
    Exponent e;
    e.value = p;
    return e;
}

Exponent Exponent::from_rational(long long num, long long den) {
    if (den == 0) throw DomainError("exponent denominator must be nonzero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Exponent e;
    e.num = num;
    e.den = den;
    e.value = static_cast<double>(num) / static_cast<double>(den);
    if (!(e.value > 1.0)) throw DomainError("exponent p must be > 1");
    return e;
}

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

long long to_ll(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw ParseError(std::string("trailing characters in ") + what);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(std::string("cannot parse ") + what + ": '" + s + "'");
    }
}

}  // namespace

Exponent Exponent::parse(const std::string& text, int N) {
    const std::string t = strip(text);
    if (t.empty()) throw ParseError("empty exponent");
    if (t == "1+1/N") {
        if (N < 1) throw DomainError("exponent 1+1/N requires N >= 1");
        return from_rational(N + 1, N);
    }
    if (const auto slash = t.find('/'); slash != std::string::npos) {
        const long long num = to_ll(strip(t.substr(0, slash)), "exponent numerator");
        const long long den = to_ll(strip(t.substr(slash + 1)), "exponent denominator");
        return from_rational(num, den);
    }
    if (const auto dot = t.find('.');
        dot != std::string::npos && t.find_first_of("eE") == std::string::npos) {
        const std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
        if (all_digits(ip) && all_digits(fp) && ip.size() + fp.size() <= 15) {
            long long num = to_ll(ip + fp, "exponent");
            long long den = 1;
            for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
            return from_rational(num, den);
        }
    }
    if (all_digits(t)) return from_rational(to_ll(t, "exponent"), 1);
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw ParseError("trailing characters in exponent");
        return from_double(v);
    } catch (const ParseError&) {
        throw;
    } catch (const DomainError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("cannot parse exponent: '" + t + "'");
    }
}

bool Exponent::is_critical(int N) const {
    if (N < 1) throw DomainError("is_critical: N must be >= 1");
    if (has_rational()) {
        return static_cast<__int128>(num) * N == static_cast<__int128>(den) * (N + 1);
    }
    return near_equal(value, 1.0 + 1.0 / N);
}

double Exponent::inv_p_minus_1() const {
    if (has_rational()) return static_cast<double>(den) / static_cast<double>(num - den);
    return 1.0 / (value - 1.0);
}

// --- ScalingLaw -------------------------------------------------------------

ScalingLaw ScalingLaw::power(double e) { return {LawVariant::PowerLaw, e, 0.0, 0.0, 0.0}; }

ScalingLaw ScalingLaw::power_log(double e, double q) {
    if (q == 0.0) return power(e);
    return {LawVariant::PowerLogLaw, e, q, 0.0, 0.0};
}

ScalingLaw ScalingLaw::loglife_large(double r) {
    return {LawVariant::LogLifespanLarge, 0.0, 0.0, r, 0.0};
}

ScalingLaw ScalingLaw::loglife_small(double r) {
    return {LawVariant::LogLifespanSmall, 0.0, 0.0, r, 0.0};
}

ScalingLaw ScalingLaw::power_over_log(double e) {
    return {LawVariant::PowerOverLogSmall, e, 0.0, 0.0, 0.0};
}

ScalingLaw ScalingLaw::finite_limit(double value) {
    return {LawVariant::FiniteLimit, 0.0, 0.0, 0.0, value};
}

ScalingLaw ScalingLaw::no_local_all() { return {LawVariant::NoLocalSolutionAllKappa, 0, 0, 0, 0}; }

ScalingLaw ScalingLaw::no_local_large() {
    return {LawVariant::NoLocalSolutionLargeKappa, 0, 0, 0, 0};
}

ScalingLaw ScalingLaw::global_small() { return {LawVariant::GlobalForSmallKappa, 0, 0, 0, 0}; }

// --- case analysis ----------------------------------------------------------

namespace {

ScalingLaw predict_singular_large(int N, const Exponent& p, const InitialProfile& pr) {
    if (!admissible(pr, N)) throw DomainError("initial profile is inadmissible for this N");
    const double A = pr.A, B = pr.B, pv = p.value;
    const bool a_is_n = near_equal(A, static_cast<double>(N));
    // T ~ [kappa (log kappa)^{-q}]^{e} away from the resonant slope A = 1/(p-1).
    const double e_pow = -2.0 * (pv - 1.0) / (1.0 - A * (pv - 1.0));

    if (p.is_subcritical(N)) {
        if (a_is_n) return ScalingLaw::power_log(e_pow, B - 1.0);
        return ScalingLaw::power_log(e_pow, B);
    }
    if (p.is_critical(N)) {
        if (!a_is_n) return ScalingLaw::power_log(e_pow, B);
        if (near_equal(B, N + 1.0)) return ScalingLaw::no_local_large();
        if (B > N + 1.0) return ScalingLaw::loglife_large(1.0 / (B - N - 1.0));
        return ScalingLaw::no_local_all();  // 1 < B < N+1; B <= 1 is inadmissible
    }
    // Supercritical: the resonant slope 1/(p-1) < N governs.
    const double inv = p.inv_p_minus_1();
    if (near_equal(A, inv)) {
        if (near_equal(B, 0.0)) return ScalingLaw::no_local_large();
        if (B > 0.0) return ScalingLaw::loglife_large(1.0 / B);
        return ScalingLaw::no_local_all();
    }
    if (A < inv) return ScalingLaw::power_log(e_pow, B);
    return ScalingLaw::no_local_all();
}

ScalingLaw predict_decay_small(int N, const Exponent& p, const InitialProfile& pr) {
    const double A = pr.A, pv = p.value;
    const double half_inv = 0.5 / (pv - 1.0);  // 1/(2(p-1))
    const bool a_is_n = near_equal(A, static_cast<double>(N));

    if (p.is_subcritical(N)) {
        if (a_is_n) return ScalingLaw::power_over_log(1.0 / (half_inv - 0.5 * N));
        return ScalingLaw::power(-1.0 / (half_inv - 0.5 * std::min(A, static_cast<double>(N))));
    }
    if (p.is_critical(N)) {
        if (a_is_n) return ScalingLaw::loglife_small((pv - 1.0) / pv);
        if (A > N) return ScalingLaw::loglife_small(pv - 1.0);
        return ScalingLaw::power(-1.0 / (half_inv - 0.5 * A));
    }
    const double inv = p.inv_p_minus_1();
    if (near_equal(A, inv) || A > inv) return ScalingLaw::global_small();
    return ScalingLaw::power(-1.0 / (half_inv - 0.5 * A));
}

}  // namespace

ScalingLaw predict(int N, const Exponent& p, const InitialProfile& profile, Regime regime) {
    if (N < 1) throw DomainError("predict: N must be >= 1");
    if (!(p.value > 1.0)) throw DomainError("predict: p must be > 1");

    if (regime == Regime::LargeKappa) {
        if (profile.kind != ProfileKind::SingularLog)
            throw InapplicableError("large-kappa asymptotics cover singular-log data only");
        return predict_singular_large(N, p, profile);
    }
    switch (profile.kind) {
        case ProfileKind::PowerDecay:
            return predict_decay_small(N, p, profile);
        case ProfileKind::GaussianGrowth:
            return ScalingLaw::finite_limit(1.0 / (4.0 * profile.lambda));
        default:
            throw InapplicableError(
                "small-kappa asymptotics cover power-decay and gaussian-growth data only");
    }
}

std::optional<double> exponent_of(const ScalingLaw& law) {
    switch (law.variant) {
        case LawVariant::PowerLaw:
        case LawVariant::PowerLogLaw:
        case LawVariant::PowerOverLogSmall:
            return law.e;
        case LawVariant::LogLifespanLarge:
            return law.r;
        case LawVariant::LogLifespanSmall:
            return -law.r;
        default:
            return std::nullopt;
    }
}

// --- text forms -------------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_field(const std::string& body, const std::string& key) {
    // body is "k=v" or "k=v,k=v"; find key= and read the number after it.
    const std::string needle = key + "=";
    const auto pos = body.find(needle);
    if (pos == std::string::npos)
        throw ParseError("scaling law: missing field '" + key + "' in '" + body + "'");
    const auto start = pos + needle.size();
    auto end = body.find(',', start);
    if (end == std::string::npos) end = body.size();
    const std::string num = strip(body.substr(start, end - start));
    try {
        std::size_t used = 0;
        const double v = std::stod(num, &used);
        if (used != num.size()) throw ParseError("scaling law: bad number '" + num + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("scaling law: bad number '" + num + "'");
    }
}

}  // namespace

std::string format_law(const ScalingLaw& law) {
    switch (law.variant) {
        case LawVariant::PowerLaw:
            return "power:e=" + fmt(law.e);
        case LawVariant::PowerLogLaw:
            return "power-log:e=" + fmt(law.e) + ",q=" + fmt(law.q);
        case LawVariant::LogLifespanLarge:
            return "loglife-large:r=" + fmt(law.r);
        case LawVariant::LogLifespanSmall:
            return "loglife-small:r=" + fmt(law.r);
        case LawVariant::PowerOverLogSmall:
            return "power-over-log:e=" + fmt(law.e);
        case LawVariant::FiniteLimit:
            return "finite-limit:T=" + fmt(law.value);
        case LawVariant::NoLocalSolutionAllKappa:
            return "no-local:all";
        case LawVariant::NoLocalSolutionLargeKappa:
            return "no-local:large-kappa";
        case LawVariant::GlobalForSmallKappa:
            return "global:small-kappa";
    }
    throw DomainError("format_law: unknown variant");
}

ScalingLaw parse_law(const std::string& text) {
    const std::string t = strip(text);
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw ParseError("scaling law: expected 'kind:fields'");
    const std::string kind = t.substr(0, colon), body = t.substr(colon + 1);
    if (kind == "power") return ScalingLaw::power(parse_field(body, "e"));
    if (kind == "power-log")
        return ScalingLaw::power_log(parse_field(body, "e"), parse_field(body, "q"));
    if (kind == "loglife-large") return ScalingLaw::loglife_large(parse_field(body, "r"));
    if (kind == "loglife-small") return ScalingLaw::loglife_small(parse_field(body, "r"));
    if (kind == "power-over-log") return ScalingLaw::power_over_log(parse_field(body, "e"));
    if (kind == "finite-limit") return ScalingLaw::finite_limit(parse_field(body, "T"));
    if (kind == "no-local") {
        if (body == "all") return ScalingLaw::no_local_all();
        if (body == "large-kappa") return ScalingLaw::no_local_large();
        throw ParseError("scaling law: no-local expects 'all' or 'large-kappa'");
    }
    if (kind == "global") {
        if (body == "small-kappa") return ScalingLaw::global_small();
        throw ParseError("scaling law: global expects 'small-kappa'");
    }
    throw ParseError("scaling law: unknown kind '" + kind + "'");
}

Regime parse_regime(const std::string& text) {
    const std::string t = strip(text);
    if (t == "large-kappa") return Regime::LargeKappa;
    if (t == "small-kappa") return Regime::SmallKappa;
    throw ParseError("regime must be 'large-kappa' or 'small-kappa'");
}

std::string format_regime(Regime regime) {
    return regime == Regime::LargeKappa ? "large-kappa" : "small-kappa";
}

}  // namespace lifespan
