#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "lifespan/conditions.hpp"
#include "lifespan/sweep.hpp"
#include "lifespan/volterra.hpp"

namespace lifespan::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "lifespan-lab 0.1.0";
inline constexpr int kSchema = 1;

/// {"schema": 1, "version": ..., "config": <echo>} — the envelope every
/// emitted record sits in.
json envelope(json config_echo);

json problem_json(const ProblemSpec& prob);
json gammas_json(const GammaConfig& g);
json verdict_json(const ConditionVerdict& v);
json bound_json(const LifespanBound& b);
json estimate_json(const BlowupEstimate& e);
json sweep_json(const SweepResult& r);

SweepResult sweep_from_json(const json& j);        // inverse of sweep_json
BlowupEstimate estimate_from_json(const json& j);  // inverse of estimate_json

std::string trace_csv(const TraceSolution& trace);       // t,w
std::string sweep_csv(const SweepResult& r);             // kappa,T_hat,source

void write_file(const std::string& path, const std::string& content);

}  // namespace lifespan::report
