#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "lifespan/conditions.hpp"
#include "lifespan/parallel.hpp"
#include "lifespan/predictor.hpp"
#include "lifespan/report.hpp"
#include "lifespan/sweep.hpp"
#include "lifespan/volterra.hpp"

namespace {

using lifespan::report::json;

struct ProblemFlags {
    int N = 1;
    std::string p_text;
    double kappa = 1.0;
    std::string profile_text;

    void attach(CLI::App* cmd) {
        cmd->add_option("--N", N, "space dimension")->capture_default_str();
        cmd->add_option("--p", p_text, "boundary exponent p > 1 (e.g. 2, 3/2, 1+1/N)")
            ->required();
        cmd->add_option("--kappa", kappa, "initial-data amplitude")->capture_default_str();
        cmd->add_option("--profile", profile_text,
                        "singular-log:A=..,B=.. | power-decay:A=.. | "
                        "gaussian-growth:lambda=.. | constant:c=..")
            ->required();
    }

    lifespan::ProblemSpec resolve() const {
        lifespan::ProblemSpec prob;
        prob.N = N;
        prob.p = lifespan::Exponent::parse(p_text, N);
        prob.kappa = kappa;
        prob.profile = lifespan::parse_profile(profile_text);
        prob.validate();
        return prob;
    }

    json echo() const {
        json j;
        j["N"] = N;
        j["p"] = p_text;
        j["kappa"] = kappa;
        j["profile"] = profile_text;
        return j;
    }
};

struct GammaFlags {
    lifespan::GammaConfig g;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gamma1", g.gamma1, "necessary-condition constant")
            ->capture_default_str();
        cmd->add_option("--gamma1p", g.gamma1p, "critical necessary constant")
            ->capture_default_str();
        cmd->add_option("--gamma2", g.gamma2, "subcritical sufficient constant")
            ->capture_default_str();
        cmd->add_option("--gamma3", g.gamma3, "split sufficient constant")
            ->capture_default_str();
        cmd->add_option("--gamma4", g.gamma4, "critical sufficient constant")
            ->capture_default_str();
        cmd->add_option("--delta", g.delta, "weight parameter in (0,1)")->capture_default_str();
        cmd->add_option("--split-a", g.a, "split exponent a in (1,p); 0 = auto")
            ->capture_default_str();
        cmd->add_option("--sigma-per-decade", g.sigma_per_decade, "sigma lattice density")
            ->capture_default_str();
        cmd->add_option("--sigma-span", g.sigma_span, "sigma grid bottom / sqrt(T)")
            ->capture_default_str();
        cmd->add_option("--sigma-grid-size", g.sigma_grid_size,
                        "fixed sigma grid size (0 = lattice)")
            ->capture_default_str();
        cmd->add_option("--t-lo", g.t_lo, "bound search lower end")->capture_default_str();
        cmd->add_option("--t-hi", g.t_hi, "bound search upper end")->capture_default_str();
        cmd->add_option("--bisect-rtol", g.bisect_rtol, "bound bisection tolerance")
            ->capture_default_str();
    }

    json echo() const { return lifespan::report::gammas_json(g); }
};

struct StepFlags {
    lifespan::StepPolicy s;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-rel-step", s.max_rel_step, "accepted relative step of w")
            ->capture_default_str();
        cmd->add_option("--dt-cap-frac", s.dt_cap_frac, "dt <= frac * t")->capture_default_str();
        cmd->add_option("--growth-cap", s.growth_cap, "max dt growth per step")
            ->capture_default_str();
        cmd->add_option("--t-start", s.t_start, "head grid end (0 = auto)")
            ->capture_default_str();
        cmd->add_option("--head-span", s.head_span, "auto head scale")->capture_default_str();
        cmd->add_option("--threshold", s.blowup_threshold, "blow-up detection level")
            ->capture_default_str();
        cmd->add_option("--bracket-factor", s.bracket_factor, "extended threshold factor")
            ->capture_default_str();
        cmd->add_option("--rate-fit-window", s.rate_fit_window, "points per rate fit")
            ->capture_default_str();
        cmd->add_option("--horizon", s.horizon, "give up beyond this time")
            ->capture_default_str();
        cmd->add_option("--checkpoint-rtol", s.checkpoint_rtol, "refinement agreement target")
            ->capture_default_str();
        cmd->add_option("--max-refinements", s.max_refinements, "extra refinement levels")
            ->capture_default_str();
        cmd->add_option("--max-steps", s.max_steps, "hard step limit")->capture_default_str();
    }

    json echo() const {
        json j;
        j["max_rel_step"] = s.max_rel_step;
        j["dt_cap_frac"] = s.dt_cap_frac;
        j["growth_cap"] = s.growth_cap;
        j["t_start"] = s.t_start;
        j["head_span"] = s.head_span;
        j["blowup_threshold"] = s.blowup_threshold;
        j["bracket_factor"] = s.bracket_factor;
        j["rate_fit_window"] = s.rate_fit_window;
        j["horizon"] = s.horizon;
        j["checkpoint_rtol"] = s.checkpoint_rtol;
        j["max_refinements"] = s.max_refinements;
        j["max_steps"] = s.max_steps;
        return j;
    }
};

std::string csv_sibling(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return path.substr(0, dot) + ".csv";
    return path + ".csv";
}

void emit(const json& record, const std::string& output, const std::string& format,
          const std::string& csv) {
    if (!output.empty()) {
        lifespan::report::write_file(output, record.dump(2) + "\n");
        if (!csv.empty()) lifespan::report::write_file(csv_sibling(output), csv);
    }
    if (format == "csv" && !csv.empty())
        std::cout << csv;
    else
        std::cout << record.dump(2) << "\n";
}

int dispatch(CLI::App& app, int argc, char** argv) {
    GammaFlags gamma_f;
    StepFlags step_f;
    int jobs = 0;
    std::string output, format = "json";
    app.add_option("--jobs", jobs, "worker threads (0 = all cores)")->capture_default_str();

    auto add_output = [&](CLI::App* cmd, bool has_csv) {
        cmd->add_option("--output", output, "write the JSON record here (CSV as sibling)");
        if (has_csv)
            cmd->add_option("--format", format, "stdout payload: json | csv")
                ->check(CLI::IsMember({"json", "csv"}))
                ->capture_default_str();
    };

    // predict
    auto* predict = app.add_subcommand("predict", "asymptotic life-span law for the data family");
    std::string regime_text;
    ProblemFlags predict_prob;
    predict_prob.attach(predict);
    predict->add_option("--regime", regime_text, "large-kappa | small-kappa")->required();
    add_output(predict, false);

    // check
    auto* check = app.add_subcommand("check", "integral conditions / life-span bounds");
    ProblemFlags check_prob;
    check_prob.attach(check);
    gamma_f.attach(check);
    double T_at = 0.0;
    CLI::Option* T_opt = check->add_option("--T", T_at, "evaluate conditions at this T "
                                                        "(omitted: search bounds)");
    add_output(check, false);

    // solve
    auto* solve = app.add_subcommand("solve", "march the boundary trace and estimate blow-up");
    ProblemFlags solve_prob;
    solve_prob.attach(solve);
    step_f.attach(solve);
    add_output(solve, true);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "T_hat(kappa) sweep fitted against the law");
    ProblemFlags sweep_prob;
    sweep_prob.attach(sweep);
    gamma_f.attach(sweep);
    step_f.attach(sweep);
    std::string source_text = "volterra", sweep_regime_text, expected_text;
    double k_lo = 0.0, k_hi = 0.0;
    int k_count = 8;
    lifespan::SweepConfig scfg;
    sweep->add_option("--source", source_text, "volterra | upper-bound | lower-bound")
        ->capture_default_str();
    sweep->add_option("--regime", sweep_regime_text, "large-kappa | small-kappa")->required();
    sweep->add_option("--kappa-lo", k_lo, "smallest kappa")->required();
    sweep->add_option("--kappa-hi", k_hi, "largest kappa")->required();
    sweep->add_option("--kappa-count", k_count, "grid size")->capture_default_str();
    sweep->add_option("--expected", expected_text, "override the predicted law");
    sweep->add_option("--match-rel-tol", scfg.match_rel_tol, "slope band, relative part")
        ->capture_default_str();
    sweep->add_option("--match-abs-tol", scfg.match_abs_tol, "slope band, absolute part")
        ->capture_default_str();
    sweep->add_option("--min-r2", scfg.min_r_squared, "fit quality floor")
        ->capture_default_str();
    sweep->add_option("--finite-limit-rtol", scfg.finite_limit_rtol, "finite-limit band")
        ->capture_default_str();
    add_output(sweep, true);

    app.require_subcommand(1);
    app.parse(argc, argv);
    lifespan::par::set_thread_count(jobs);

    if (*predict) {
        const lifespan::ProblemSpec prob = predict_prob.resolve();
        const lifespan::Regime regime = lifespan::parse_regime(regime_text);
        const lifespan::ScalingLaw law =
            lifespan::predict(prob.N, prob.p, prob.profile, regime);
        json echo = predict_prob.echo();
        echo["command"] = "predict";
        echo["regime"] = regime_text;
        echo["jobs"] = jobs;
        json record = lifespan::report::envelope(std::move(echo));
        record["law"] = lifespan::format_law(law);
        emit(record, output, format, "");
        return 0;
    }

    if (*check) {
        const lifespan::ProblemSpec prob = check_prob.resolve();
        lifespan::ConditionEvaluator ev(prob, gamma_f.g);
        json echo = check_prob.echo();
        echo["command"] = "check";
        echo["gammas"] = gamma_f.echo();
        echo["jobs"] = jobs;
        if (*T_opt) echo["T"] = T_at;
        json record = lifespan::report::envelope(std::move(echo));
        if (*T_opt) {
            record["necessary"] =
                lifespan::report::verdict_json(ev.necessary(prob.kappa, T_at));
            try {
                record["sufficient"] =
                    lifespan::report::verdict_json(ev.sufficient(prob.kappa, T_at));
            } catch (const lifespan::InapplicableError& e) {
                record["sufficient"] = json{{"error", e.what()}};
            }
        } else {
            record["upper_bound"] = lifespan::report::bound_json(ev.upper_bound(prob.kappa));
            try {
                record["lower_bound"] =
                    lifespan::report::bound_json(ev.lower_bound(prob.kappa));
            } catch (const lifespan::InapplicableError& e) {
                record["lower_bound"] = json{{"error", e.what()}};
            }
        }
        emit(record, output, format, "");
        return 0;
    }

    if (*solve) {
        const lifespan::ProblemSpec prob = solve_prob.resolve();
        const lifespan::TraceSolution trace =
            lifespan::solve_boundary_trace(prob, step_f.s);
        const lifespan::BlowupEstimate est =
            lifespan::estimate_blowup_time(prob, step_f.s);
        json echo = solve_prob.echo();
        echo["command"] = "solve";
        echo["step"] = step_f.echo();
        echo["jobs"] = jobs;
        json record = lifespan::report::envelope(std::move(echo));
        record["estimate"] = lifespan::report::estimate_json(est);
        json tj;
        tj["points"] = trace.t.size();
        tj["blew_up"] = trace.blew_up;
        tj["head_truncated"] = trace.head_truncated;
        tj["stop_reason"] = trace.stop_reason;
        record["trace"] = std::move(tj);
        emit(record, output, format, lifespan::report::trace_csv(trace));
        return 0;
    }

    // sweep
    const lifespan::ProblemSpec prob = sweep_prob.resolve();
    const lifespan::Regime regime = lifespan::parse_regime(sweep_regime_text);
    const lifespan::SweepSource source = lifespan::parse_source(source_text);
    scfg.step = step_f.s;
    scfg.gammas = gamma_f.g;
    scfg.jobs = jobs;
    if (!expected_text.empty()) scfg.expected_override = lifespan::parse_law(expected_text);
    const auto kappas = lifespan::geometric_kappas(k_lo, k_hi, k_count);
    const lifespan::SweepResult res =
        lifespan::run_sweep(prob, kappas, source, regime, scfg);
    json echo = sweep_prob.echo();
    echo["command"] = "sweep";
    echo["regime"] = sweep_regime_text;
    echo["source"] = source_text;
    echo["kappa_lo"] = k_lo;
    echo["kappa_hi"] = k_hi;
    echo["kappa_count"] = k_count;
    echo["gammas"] = gamma_f.echo();
    echo["step"] = step_f.echo();
    echo["jobs"] = jobs;
    if (!expected_text.empty()) echo["expected"] = expected_text;
    json record = lifespan::report::envelope(std::move(echo));
    record["sweep"] = lifespan::report::sweep_json(res);
    emit(record, output, format, lifespan::report::sweep_csv(res));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"life-span laboratory: heat equation on the half-space with the "
                 "nonlinear boundary flux -du/dn = u^p"};
    try {
        return dispatch(app, argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const lifespan::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const lifespan::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const lifespan::InapplicableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lifespan::WrongRegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
