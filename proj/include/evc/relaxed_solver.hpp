// Continuous relaxation solver: minimizes sum_j [g - f] over box-relaxed
// placements and packet sizes, subject to capacity, count, security and
// rate constraints, with optional equality pins on individual placement
// entries. Multi-start projected-gradient with an augmented-Lagrangian
// treatment of the bilinear capacity constraint.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "evc/types.hpp"

namespace evc {

struct Pin {
    int k = 0, i = 0, j = 0;
    int value = 0;  // exactly 0 or 1
};
using PinSet = std::vector<Pin>;

enum class SolveStatus { feasible, infeasible, max_iters };

struct RelaxedOptions {
    int n_starts = 16;
    uint64_t seed = 1;
    double tol_constraint = 1e-6;   // absolute, per constraint residual
    double tol_grad = 1e-6;         // projected-gradient norm
    long max_inner_iters = 10000;   // per start
    double smoothing_eps = 1e-9;    // 2/3-power smoothing near 0

    // Freeze the packet sizes (fixed-rate caching mode).
    std::optional<EncodingPlan> fixed_plan;
    // Optional initial point [m..., s...] used as start 0 (branch re-solves),
    // together with the capacity multipliers it converged with.
    std::optional<std::vector<double>> warm_start;
    std::optional<std::vector<double>> warm_multipliers;
    double warm_mu = 0.0;
};

struct RelaxedSolution {
    int servers = 0, packets = 0, num_files = 0;
    std::vector<double> m;   // K*n*F entries in [0,1], layout (k*n+i)*F+j
    EncodingPlan plan;
    double objective = 0.0;  // minimization value of the relaxed problem, unsmoothed
    SolveStatus status = SolveStatus::infeasible;
    int best_start = -1;
    long iterations = 0;     // inner iterations, summed over starts
    long evaluations = 0;    // objective/gradient evaluations, summed
    std::vector<double> multipliers;  // capacity multipliers at the solution
    double penalty_mu = 0.0;

    double m_at(int k, int i, int j) const {
        return m[(static_cast<size_t>(k) * packets + i) * num_files + j];
    }
};

// Worst-case constraint violations of a relaxed point (all >= 0; 0 = satisfied).
struct RelaxedResiduals {
    std::vector<double> capacity;   // per server, Mb over Phi_k
    std::vector<double> count_upper;  // per file, over n
    std::vector<double> security;   // per file, below the secure bound
    std::vector<double> rate;       // per file, Mb outside the rate window
    double box = 0.0;               // largest box violation over m entries
    double max_violation() const;
};

RelaxedResiduals relaxed_residuals(const Scenario& scenario,
                                   const std::vector<double>& m,
                                   const EncodingPlan& plan);

// Raw (unsmoothed) minimization objective sum_j [g - f] of a relaxed point.
double relaxed_objective(const Scenario& scenario, const std::vector<double>& m,
                         const EncodingPlan& plan);

// Throws std::invalid_argument on malformed pins (duplicates, values outside
// {0,1}, out-of-range coordinates) or n_starts == 0. Pin sets whose arithmetic
// already contradicts the count or security constraints yield an infeasible
// status instead.
RelaxedSolution solve_relaxed(const Scenario& scenario, const PinSet& pins,
                              const RelaxedOptions& options);

// Entries whose value is farther than tol from both 0 and 1, ordered
// lexicographically by (j, i, k).
std::vector<std::array<int, 3>> fractional_entries(const RelaxedSolution& sol,
                                                   double tol);

}  // namespace evc
