#include "lifespan/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace lifespan::report {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// JSON has no inf/nan literals; non-finite values travel as strings.
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_back(const json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
    throw ParseError("expected a number or inf/-inf/nan, got '" + s + "'");
}

std::string exponent_text(const Exponent& p) {
    if (p.has_rational()) {
        if (p.den == 1) return std::to_string(p.num);
        return std::to_string(p.num) + "/" + std::to_string(p.den);
    }
    return fmt(p.value);
}

const char* method_text(BlowupMethod m) {
    return m == BlowupMethod::ThresholdRateFit ? "threshold-rate-fit" : "grid-exhausted";
}

const char* verdict_text(SweepVerdict v) {
    switch (v) {
        case SweepVerdict::Match: return "match";
        case SweepVerdict::Mismatch: return "mismatch";
        case SweepVerdict::Inconclusive: return "inconclusive";
    }
    throw DomainError("unknown sweep verdict");
}

SweepVerdict verdict_back(const std::string& s) {
    if (s == "match") return SweepVerdict::Match;
    if (s == "mismatch") return SweepVerdict::Mismatch;
    if (s == "inconclusive") return SweepVerdict::Inconclusive;
    throw ParseError("unknown sweep verdict '" + s + "'");
}

}  // namespace

json envelope(json config_echo) {
    json j;
    j["schema"] = kSchema;
    j["version"] = kVersion;
    j["config"] = std::move(config_echo);
    return j;
}

json problem_json(const ProblemSpec& prob) {
    json j;
    j["N"] = prob.N;
    j["p"] = exponent_text(prob.p);
    j["kappa"] = prob.kappa;
    j["profile"] = format_profile(prob.profile);
    return j;
}

json gammas_json(const GammaConfig& g) {
    json j;
    j["gamma1"] = g.gamma1;
    j["gamma1p"] = g.gamma1p;
    j["gamma2"] = g.gamma2;
    j["gamma3"] = g.gamma3;
    j["gamma4"] = g.gamma4;
    j["delta"] = g.delta;
    j["a"] = g.a;
    j["sigma_per_decade"] = g.sigma_per_decade;
    j["sigma_span"] = g.sigma_span;
    j["sigma_grid_size"] = g.sigma_grid_size;
    j["t_lo"] = g.t_lo;
    j["t_hi"] = g.t_hi;
    j["bisect_rtol"] = g.bisect_rtol;
    return j;
}

json verdict_json(const ConditionVerdict& v) {
    json j;
    j["condition"] = v.name;
    j["holds"] = v.holds;
    j["worst_sigma"] = num(v.worst_sigma);
    j["margin"] = num(v.margin);
    return j;
}

json bound_json(const LifespanBound& b) {
    json j;
    switch (b.kind) {
        case BoundKind::Zero: j["kind"] = "zero"; break;
        case BoundKind::Value: j["kind"] = "value"; break;
        case BoundKind::UnboundedOnGrid: j["kind"] = "unbounded-on-grid"; break;
    }
    j["T"] = num(b.T);
    return j;
}

json estimate_json(const BlowupEstimate& e) {
    json j;
    if (e.T_est)
        j["T_est"] = *e.T_est;
    else
        j["T_est"] = nullptr;
    j["T_lo"] = num(e.T_lo);
    j["T_hi"] = num(e.T_hi);
    j["method"] = method_text(e.method);
    j["steps"] = e.steps;
    j["refinements"] = e.refinements;
    j["detail"] = e.detail;
    return j;
}

BlowupEstimate estimate_from_json(const json& j) {
    BlowupEstimate e;
    if (!j.at("T_est").is_null()) e.T_est = j.at("T_est").get<double>();
    e.T_lo = num_back(j.at("T_lo"));
    e.T_hi = num_back(j.at("T_hi"));
    const std::string m = j.at("method").get<std::string>();
    if (m == "threshold-rate-fit")
        e.method = BlowupMethod::ThresholdRateFit;
    else if (m == "grid-exhausted")
        e.method = BlowupMethod::GridExhausted;
    else
        throw ParseError("unknown estimate method '" + m + "'");
    e.steps = j.at("steps").get<std::size_t>();
    e.refinements = j.at("refinements").get<int>();
    e.detail = j.at("detail").get<std::string>();
    return e;
}

json sweep_json(const SweepResult& r) {
    json j;
    json pts = json::array();
    for (const SweepPoint& pt : r.points) {
        json pj;
        pj["kappa"] = pt.kappa;
        pj["T_hat"] = pt.ok ? json(pt.T_hat) : json(nullptr);
        pj["source"] = format_source(pt.source);
        pj["ok"] = pt.ok;
        if (!pt.ok) pj["reason"] = pt.reason;
        pts.push_back(std::move(pj));
    }
    j["points"] = std::move(pts);
    j["predicted"] = format_law(r.predicted);
    j["fitted_exponent"] = num(r.fitted_exponent);
    j["fit_stderr"] = num(r.fit_stderr);
    j["r_squared"] = num(r.r_squared);
    j["verdict"] = verdict_text(r.verdict);
    j["tolerance"] = r.tolerance;
    if (r.predicted.variant == LawVariant::FiniteLimit) {
        const SweepPoint* best = nullptr;
        for (const SweepPoint& pt : r.points)
            if (!best || pt.kappa < best->kappa) best = &pt;
        if (best && best->ok && r.predicted.value > 0.0) {
            json lc;
            lc["kappa_min"] = best->kappa;
            lc["T_hat"] = best->T_hat;
            lc["limit"] = r.predicted.value;
            lc["rel_diff"] = std::abs(best->T_hat - r.predicted.value) / r.predicted.value;
            j["limit_check"] = std::move(lc);
        }
    }
    return j;
}

SweepResult sweep_from_json(const json& j) {
    SweepResult r;
    for (const json& pj : j.at("points")) {
        SweepPoint pt;
        pt.kappa = pj.at("kappa").get<double>();
        pt.ok = pj.at("ok").get<bool>();
        if (pt.ok) pt.T_hat = pj.at("T_hat").get<double>();
        pt.source = parse_source(pj.at("source").get<std::string>());
        if (pj.contains("reason")) pt.reason = pj.at("reason").get<std::string>();
        r.points.push_back(std::move(pt));
    }
    r.predicted = parse_law(j.at("predicted").get<std::string>());
    r.fitted_exponent = num_back(j.at("fitted_exponent"));
    r.fit_stderr = num_back(j.at("fit_stderr"));
    r.r_squared = num_back(j.at("r_squared"));
    r.verdict = verdict_back(j.at("verdict").get<std::string>());
    r.tolerance = j.at("tolerance").get<double>();
    return r;
}

std::string trace_csv(const TraceSolution& trace) {
    std::string out = "t,w\n";
    for (std::size_t i = 0; i < trace.t.size(); ++i)
        out += fmt(trace.t[i]) + "," + fmt(trace.w[i]) + "\n";
    return out;
}

std::string sweep_csv(const SweepResult& r) {
    std::string out = "kappa,T_hat,source\n";
    for (const SweepPoint& pt : r.points)
        if (pt.ok)
            out += fmt(pt.kappa) + "," + fmt(pt.T_hat) + "," + format_source(pt.source) + "\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << content;
    if (!f.good()) throw Error("short write to '" + path + "'");
}

}  // namespace lifespan::report
