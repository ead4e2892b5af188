#include "evc/bnb_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-9;

uint64_t mix(uint64_t a, uint64_t b) {
    a ^= b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2);
    return a;
}

RelaxedOptions branch_options(const BnbOptions& options, const BnbState& state,
                              uint64_t salt) {
    RelaxedOptions ro = options.relax;
    ro.n_starts = std::max(1, options.branch_starts);
    ro.seed = mix(options.relax.seed, salt);
    // warm-started re-solves settle much faster than the root solve
    ro.max_inner_iters = std::max<long>(2000, options.relax.max_inner_iters / 5);
    // warm start from the parent solution, multipliers included, so the
    // re-solve stays in the parent's basin
    std::vector<double> x;
    x.reserve(state.current.m.size() + state.current.plan.raw().size());
    x.insert(x.end(), state.current.m.begin(), state.current.m.end());
    const auto& s = state.current.plan.raw();
    x.insert(x.end(), s.begin(), s.end());
    ro.warm_start = std::move(x);
    ro.warm_multipliers = state.current.multipliers;
    ro.warm_mu = state.current.penalty_mu;
    return ro;
}

}  // namespace

Placement round_placement(const RelaxedSolution& sol) {
    Placement p(sol.servers, sol.packets, sol.num_files);
    for (int k = 0; k < sol.servers; ++k)
        for (int i = 0; i < sol.packets; ++i)
            for (int j = 0; j < sol.num_files; ++j)
                p.set(k, i, j, sol.m_at(k, i, j) >= 0.5);
    return p;
}

bool repair_capacity(const Scenario& sc, const Placement& placement,
                     EncodingPlan& plan) {
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    for (int k = 0; k < K; ++k) {
        double over = server_load(placement, plan, k) - sc.capacities_mb[k];
        if (over <= 0.0) continue;
        // move volume from packets cached on k into uncached packets of the
        // same file; file totals (and hence f and the rate window) unchanged
        for (int j = 0; j < F && over > 0.0; ++j) {
            int spare = -1;
            for (int i = 0; i < n; ++i) {
                bool cached_any = false;
                for (int kk = 0; kk < K; ++kk)
                    if (placement.cached(kk, i, j)) cached_any = true;
                if (!cached_any) {
                    spare = i;
                    break;
                }
            }
            if (spare < 0) continue;
            for (int i = 0; i < n && over > 0.0; ++i) {
                if (!placement.cached(k, i, j) || i == spare) continue;
                const double take = std::min(over * (1.0 + 1e-12) + 1e-12, plan.size(i, j));
                if (take <= 0.0) continue;
                plan.set(i, j, plan.size(i, j) - take);
                plan.set(spare, j, plan.size(spare, j) + take);
                over -= take;
            }
        }
        // fallback: shrink fully cached files toward their minimum size
        for (int j = 0; j < F && over > 0.0; ++j) {
            const double lo = sc.files[j].r_min * sc.duration_s;
            double total = plan.file_total(j);
            for (int i = 0; i < n && over > 0.0 && total > lo; ++i) {
                if (!placement.cached(k, i, j)) continue;
                const double take =
                    std::min({over * (1.0 + 1e-12) + 1e-12, plan.size(i, j), total - lo});
                if (take <= 0.0) continue;
                plan.set(i, j, plan.size(i, j) - take);
                total -= take;
                over -= take;
            }
        }
        if (over > 1e-9) return false;
    }
    return true;
}

SolveResult finalize_result(const Scenario& sc, Placement placement,
                            EncodingPlan plan, std::string scheme) {
    SolveResult res;
    res.scheme = std::move(scheme);
    repair_capacity(sc, placement, plan);
    res.report = check_feasibility(sc, placement, plan);
    res.status = res.report.feasible() ? SolveStatus::feasible : SolveStatus::infeasible;
    const ObjectiveBreakdown ob = objective(sc, placement, plan);
    res.q = ob.total;
    res.q_min = -ob.total;
    res.placement = std::move(placement);
    res.plan = std::move(plan);
    return res;
}

BnbState bnb_init(const Scenario& sc, const BnbOptions& options) {
    BnbState state;
    state.current = solve_relaxed(sc, {}, options.relax);
    state.relaxed_solves = 1;
    if (state.current.status != SolveStatus::feasible) {
        state.whole_infeasible = state.current.status == SolveStatus::infeasible;
        state.budget_exhausted = state.current.status == SolveStatus::max_iters;
        return state;
    }
    state.fractional = fractional_entries(state.current, options.frac_tol);
    return state;
}

void branch_step(BnbState& state, const Scenario& sc, const BnbOptions& options) {
    if (state.fractional.empty() || state.whole_infeasible) return;

    double best_obj = kInf;
    int best_entry = -1, best_value = 0;
    RelaxedSolution best_sol;
    bool any_max_iters = false;

    for (size_t e = 0; e < state.fractional.size(); ++e) {
        const auto [k, i, j] = state.fractional[e];
        for (int value = 0; value <= 1; ++value) {
            PinSet pins = state.pins;
            pins.push_back({k, i, j, value});
            const uint64_t salt =
                mix(mix(static_cast<uint64_t>(state.steps) * 2654435761ULL, e * 2 + value),
                    (static_cast<uint64_t>(k) << 40) ^ (static_cast<uint64_t>(i) << 20) ^
                        static_cast<uint64_t>(j));
            RelaxedSolution sol =
                solve_relaxed(sc, pins, branch_options(options, state, salt));
            ++state.relaxed_solves;
            if (sol.status != SolveStatus::feasible) {
                if (sol.status == SolveStatus::max_iters) any_max_iters = true;
                continue;  // scored +inf
            }
            // strict improvement, with a lexicographic tie-break on
            // (entry order, 0 before 1)
            if (sol.objective < best_obj - kTieTol) {
                best_obj = sol.objective;
                best_entry = static_cast<int>(e);
                best_value = value;
                best_sol = std::move(sol);
            }
        }
    }

    ++state.steps;
    if (best_entry < 0) {
        state.whole_infeasible = !any_max_iters;
        state.budget_exhausted = any_max_iters;
        return;
    }
    const auto [k, i, j] = state.fractional[best_entry];
    state.pins.push_back({k, i, j, best_value});
    state.current = std::move(best_sol);
    state.fractional = fractional_entries(state.current, options.frac_tol);
}

SolveResult solve_ec_ve(const Scenario& sc, const BnbOptions& options) {
    sc.validate();
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    const long dim_cap = static_cast<long>(K) * n * F;

    BnbState state = bnb_init(sc, options);
    SolveCounters counters;
    counters.variable_dimension = static_cast<long>(K + 1) * n * F;

    if (state.current.status != SolveStatus::feasible) {
        SolveResult res;
        res.status = state.budget_exhausted ? SolveStatus::max_iters
                                            : SolveStatus::infeasible;
        res.scheme = "ec-ve";
        counters.relaxed_solves = state.relaxed_solves;
        res.counters = counters;
        res.placement = Placement(K, n, F);
        res.plan = EncodingPlan(n, F);
        return res;
    }
    const double root_q = -state.current.objective;

    while (!state.fractional.empty() && state.steps < dim_cap) {
        branch_step(state, sc, options);
        if (state.whole_infeasible || state.budget_exhausted) {
            SolveResult res;
            res.status = state.budget_exhausted ? SolveStatus::max_iters
                                                : SolveStatus::infeasible;
            res.scheme = "ec-ve";
            counters.relaxed_solves = state.relaxed_solves;
            counters.branch_steps = state.steps;
            res.counters = counters;
            res.root_objective = root_q;
            res.placement = Placement(K, n, F);
            res.plan = EncodingPlan(n, F);
            return res;
        }
    }

    Placement placement = round_placement(state.current);
    EncodingPlan plan = state.current.plan;

    // rate polish: with the placement fixed, one more relaxed solve
    // re-optimizes the packet sizes (skipped when nothing was branched
    // and for frozen plans)
    if (state.steps > 0 && !options.relax.fixed_plan.has_value()) {
        PinSet all;
        all.reserve(static_cast<size_t>(K) * n * F);
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < F; ++j)
                    all.push_back({k, i, j, placement.cached(k, i, j) ? 1 : 0});
        RelaxedOptions ro = options.relax;
        ro.n_starts = std::max(1, options.branch_starts);
        ro.seed = mix(options.relax.seed, 0xF1A5ULL);
        std::vector<double> x;
        x.insert(x.end(), state.current.m.begin(), state.current.m.end());
        const auto& s = state.current.plan.raw();
        x.insert(x.end(), s.begin(), s.end());
        ro.warm_start = std::move(x);
        ro.warm_multipliers = state.current.multipliers;
        ro.warm_mu = state.current.penalty_mu;
        RelaxedSolution polished = solve_relaxed(sc, all, ro);
        ++state.relaxed_solves;
        if (polished.status == SolveStatus::feasible &&
            polished.objective <= state.current.objective + 1e-12)
            plan = polished.plan;
    }

    SolveResult res = finalize_result(sc, std::move(placement), std::move(plan), "ec-ve");
    counters.relaxed_solves = state.relaxed_solves;
    counters.branch_steps = state.steps;
    res.counters = counters;
    res.root_objective = root_q;
    return res;
}

}  // namespace evc
