// Ground-truth solver for tiny instances: exhaustive enumeration of all
// binary placements against a per-file uniform rate grid with equal packet
// sizes. Clarity over speed; refuses instances beyond the budget.
#pragma once

#include "evc/bnb_solver.hpp"

namespace evc {

// Global maximum over the enumerated lattice. Requires K*n*F <= 22 and a
// total lattice below ~1e9 points; throws std::invalid_argument otherwise.
SolveResult oracle_solve(const Scenario& scenario, int rate_grid_points);

// Re-evaluates a solver result on the oracle lattice: per-file cached counts
// kept, rates floored to the grid, equal packet sizes.
SolveResult snap_to_grid(const Scenario& scenario, const SolveResult& result,
                         int rate_grid_points);

}  // namespace evc
