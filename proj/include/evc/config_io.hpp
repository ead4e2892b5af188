// JSON scenario and sweep-spec parsing. Schema (field names match the docs
// in the README): {F, n, K, capacities_mb[], T_d_s, R_bk_mbps,
// total_requests, theta, classes[]{count, r_min, r_max, c1..c4, v},
// file_classes[] (optional)}. Parse errors name the offending key.
#pragma once

#include <string>

#include "evc/catalog.hpp"
#include "evc/harness.hpp"

namespace evc {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

ScenarioConfig parse_scenario_config(const std::string& json_text);
ScenarioConfig load_scenario_config(const std::string& path);

SweepSpec parse_sweep_spec(const std::string& json_text);
SweepSpec load_sweep_spec(const std::string& path);

}  // namespace evc
