// EC-VE: iterative 0/1 Boolean-bound branching driven by the relaxed solver
// until the placement is integral. Also provides the shared result type and
// instrumentation counters used by every scheme.
#pragma once

#include <string>

#include "evc/qoe.hpp"
#include "evc/relaxed_solver.hpp"
#include "evc/types.hpp"

namespace evc {

struct SolveCounters {
    long relaxed_solves = 0;
    long branch_steps = 0;
    long greedy_steps = 0;       // adopted rate increments
    long greedy_evaluations = 0; // candidate evaluations
    long greedy_cap_n1 = 0;
    long greedy_cap_n2 = 0;
    long oracle_points = 0;      // enumerated lattice points
    long variable_dimension = 0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    Placement placement;
    EncodingPlan plan;
    double q = 0.0;            // Eq. (8) value, maximization sense
    double q_min = 0.0;        // minimization value (= -q)
    double root_objective = 0.0;  // root relaxation bound, maximization sense
    FeasibilityReport report;
    std::string scheme;
    SolveCounters counters;
    bool step_overridden = false;

    double mean_mos() const {
        return placement.files() > 0 ? q / placement.files() : 0.0;
    }
};

struct BnbOptions {
    RelaxedOptions relax;
    int branch_starts = 2;   // restarts per sub-relaxing problem (warm-started)
    double frac_tol = 1e-6;  // snap tolerance for integrality
};

struct BnbState {
    PinSet pins;
    RelaxedSolution current;
    std::vector<std::array<int, 3>> fractional;  // index list, (k,i,j) per entry
    int steps = 0;
    long relaxed_solves = 0;
    bool whole_infeasible = false;
    bool budget_exhausted = false;

    int fractional_count() const { return static_cast<int>(fractional.size()); }
};

// Root relaxation; state.whole_infeasible is set when it fails.
BnbState bnb_init(const Scenario& scenario, const BnbOptions& options);

// One iteration: solves the 0- and 1-branch for every fractional entry,
// adopts the minimum-objective branch, appends its pin. No-op when the
// current solution is already integral.
void branch_step(BnbState& state, const Scenario& scenario, const BnbOptions& options);

SolveResult solve_ec_ve(const Scenario& scenario, const BnbOptions& options);

// Rounds a relaxed solution to a Placement (entries within frac_tol snap).
Placement round_placement(const RelaxedSolution& sol);

// Shifts tiny post-rounding capacity overflows out of the cached volume
// (within-file moves first, total shrink toward r_min as a fallback).
// Returns false if the overflow cannot be repaired.
bool repair_capacity(const Scenario& scenario, const Placement& placement,
                     EncodingPlan& plan);

SolveResult finalize_result(const Scenario& scenario, Placement placement,
                            EncodingPlan plan, std::string scheme);

}  // namespace evc
