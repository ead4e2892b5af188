// Greedy EC-VE: caching solved once at fixed rates through the
// branch-and-bound machinery with frozen packet sizes, then single-file
// rate stepping on the 1/(T_d*n) grid.
#pragma once

#include <optional>

#include "evc/bnb_solver.hpp"

namespace evc {

struct GreedyOptions {
    BnbOptions bnb;
    double step_override_mbps = 0.0;  // 0 -> the default 1/(T_d*n)
    long max_outer_override = 0;      // 0 -> the (R_max-R_min)/step * F safety cap
};

// Integral placement minimizing the latency penalty at equal packet sizes
// s_ij = rates_j*T_d/n. Rates outside the per-file window throw
// std::invalid_argument; an unsatisfiable instance yields nullopt.
// Counters (relaxed solves, branch steps) accumulate into *counters.
std::optional<Placement> solve_caching_fixed_rates(const Scenario& scenario,
                                                   const std::vector<double>& rates_mbps,
                                                   const BnbOptions& options,
                                                   SolveCounters* counters);

SolveResult solve_greedy_ec_ve(const Scenario& scenario, const GreedyOptions& options);

}  // namespace evc
