// Comparison schemes: ECST-like fixed-rate secure caching, caching-only (EC)
// and encoding-only (VE) ablations.
#pragma once

#include <vector>

#include "evc/bnb_solver.hpp"

namespace evc {

// Fixed-rate presets used across the paper's sweeps:
// r = r_min + (r_max - r_min) / divisor, divisor 0 meaning plain r_min.
std::vector<double> fixed_rates(const Scenario& scenario, int divisor);

// ECST-like scheme: equal packet sizes at the given fixed rates, the same
// per-server cached count for every server, greedy fill minimizing the
// backhaul volume under capacity and the secure bound.
SolveResult solve_ecst(const Scenario& scenario, const std::vector<double>& rates_mbps);

// Caching-only ablation: rates frozen at r_min, placement from the
// fixed-rate caching stage.
SolveResult solve_ec_only(const Scenario& scenario, const BnbOptions& options);

// Encoding-only ablation: everything cached (first-fit across servers),
// rates raised greedily within the total capacity.
SolveResult solve_ve_only(const Scenario& scenario);

}  // namespace evc
