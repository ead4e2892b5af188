// Experiment harness: scheme dispatch, axis sweeps, minimum-capacity
// bisection and CSV emission.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evc/baselines.hpp"
#include "evc/catalog.hpp"
#include "evc/greedy_solver.hpp"

namespace evc {

enum class SweepAxis { capacity, num_files, num_packets, num_servers, total_requests };

std::string axis_name(SweepAxis axis);
SweepAxis axis_from_name(const std::string& name);

struct HarnessOptions {
    uint64_t seed = 1;
    int n_starts = 16;
    int branch_starts = 4;
    double tol_constraint = 1e-6;
    double tol_grad = 1e-6;
    long max_inner_iters = 10000;
    double smoothing_eps = 1e-9;
    double greedy_step_mbps = 0.0;  // 0 -> paper default 1/(T_d*n)
    int ecst_rate_divisor = 0;      // 0 -> r_min

    BnbOptions bnb() const;
    GreedyOptions greedy() const;
};

struct SweepSpec {
    ScenarioConfig scenario;
    SweepAxis axis = SweepAxis::capacity;
    std::vector<double> values;
    std::vector<std::vector<double>> capacity_vectors;  // num_servers axis
    std::vector<std::string> schemes;
    HarnessOptions options;
};

struct ResultRow {
    double axis_value = 0.0;
    std::string scheme;
    bool feasible = false;
    double mean_mos = 0.0;
    double total_q = 0.0;
    double latency_s = 0.0;
    long relaxed_solves = 0;
    long branch_steps = 0;
    long greedy_steps = 0;
};

// Runs the named scheme on a scenario. Unknown names throw
// std::invalid_argument.
SolveResult run_scheme(const Scenario& scenario, const std::string& scheme,
                       const HarnessOptions& options);

ResultRow row_from_result(const Scenario& scenario, double axis_value,
                          const SolveResult& result);

std::vector<ResultRow> run_sweep(const SweepSpec& spec);

// Smallest uniform per-server capacity (multiple of `resolution_mb`) at which
// the scheme reports feasible; nullopt when it stays infeasible even at twice
// the all-max-rates catalog size.
std::optional<double> min_capacity(const ScenarioConfig& config,
                                   const std::string& scheme, double resolution_mb,
                                   const HarnessOptions& options);

std::string to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(const std::string& text);

}  // namespace evc
