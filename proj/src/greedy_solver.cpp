#include "evc/greedy_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evc {

namespace {

// With frozen equal sizes volume cannot be shuffled between packets, so a
// post-rounding overflow is repaired by dropping whole cached packets whose
// removal keeps the secure bound intact.
bool drop_overflow_packets(const Scenario& sc, Placement& placement,
                           const EncodingPlan& plan) {
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    for (int k = 0; k < K; ++k) {
        double over = server_load(placement, plan, k) - sc.capacities_mb[k];
        while (over > 1e-9) {
            int pick_j = -1;
            double pick_dg = 0.0;
            for (int j = 0; j < F; ++j) {
                const int total = placement.total_count(j);
                if (placement.count(k, j) == 0) continue;
                if (total - 1 < security_rhs(n, sc.files[j].requests) - 1e-9) continue;
                const double size = plan.size(0, j);
                const VideoFile& f = sc.files[j];
                auto g_at = [&](int c) {
                    const double y =
                        f.popularity * (n - c) * size / sc.backhaul_rate_mbps;
                    return f.v * std::pow(std::max(0.0, y), 2.0 / 3.0);
                };
                const double dg = g_at(total - 1) - g_at(total);
                if (pick_j < 0 || dg < pick_dg - 1e-15) {
                    pick_j = j;
                    pick_dg = dg;
                }
            }
            if (pick_j < 0) return false;
            for (int i = n - 1; i >= 0; --i)
                if (placement.cached(k, i, pick_j)) {
                    placement.set(k, i, pick_j, false);
                    over -= plan.size(i, pick_j);
                    break;
                }
        }
    }
    return true;
}

}  // namespace

std::optional<Placement> solve_caching_fixed_rates(const Scenario& sc,
                                                   const std::vector<double>& rates,
                                                   const BnbOptions& options,
                                                   SolveCounters* counters) {
    sc.validate();
    if (static_cast<int>(rates.size()) != sc.num_files())
        throw std::invalid_argument("solve_caching_fixed_rates: rates length mismatch");
    for (int j = 0; j < sc.num_files(); ++j)
        if (rates[j] < sc.files[j].r_min - 1e-9 || rates[j] > sc.files[j].r_max + 1e-9)
            throw std::invalid_argument(
                "solve_caching_fixed_rates: rate outside [r_min, r_max] for file " +
                std::to_string(j + 1));

    const EncodingPlan plan =
        EncodingPlan::equal_split(rates, sc.duration_s, sc.packets_per_file);
    BnbOptions opt = options;
    opt.relax.fixed_plan = plan;

    const long dim_cap = static_cast<long>(sc.num_servers) * sc.packets_per_file *
                         sc.num_files();
    BnbState state = bnb_init(sc, opt);
    while (state.current.status == SolveStatus::feasible &&
           !state.fractional.empty() && state.steps < dim_cap)
        branch_step(state, sc, opt);

    if (counters) {
        counters->relaxed_solves += state.relaxed_solves;
        counters->branch_steps += state.steps;
    }
    if (state.current.status != SolveStatus::feasible || state.whole_infeasible ||
        state.budget_exhausted)
        return std::nullopt;

    Placement placement = round_placement(state.current);
    if (!drop_overflow_packets(sc, placement, plan)) return std::nullopt;
    if (!check_feasibility(sc, placement, plan).feasible()) return std::nullopt;
    return placement;
}

SolveResult solve_greedy_ec_ve(const Scenario& sc, const GreedyOptions& options) {
    sc.validate();
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();

    SolveCounters counters;
    counters.variable_dimension = static_cast<long>(K) * n * F;

    std::vector<double> rates(F);
    for (int j = 0; j < F; ++j) rates[j] = sc.files[j].r_min;

    auto placement_opt = solve_caching_fixed_rates(sc, rates, options.bnb, &counters);
    if (!placement_opt) {
        SolveResult res;
        res.status = SolveStatus::infeasible;
        res.scheme = "greedy-ec-ve";
        res.counters = counters;
        res.placement = Placement(K, n, F);
        res.plan = EncodingPlan(n, F);
        res.step_overridden = options.step_override_mbps > 0.0;
        return res;
    }
    Placement placement = std::move(*placement_opt);

    const double step = options.step_override_mbps > 0.0
                            ? options.step_override_mbps
                            : 1.0 / (sc.duration_s * n);
    double rmax_g = 0.0, rmin_g = sc.files[0].r_min;
    for (const VideoFile& f : sc.files) {
        rmax_g = std::max(rmax_g, f.r_max);
        rmin_g = std::min(rmin_g, f.r_min);
    }
    const long n1 = options.max_outer_override > 0
                        ? options.max_outer_override
                        : static_cast<long>(std::ceil((rmax_g - rmin_g) / step)) * F;
    const long n2 = F;
    counters.greedy_cap_n1 = n1;
    counters.greedy_cap_n2 = n2;

    // rates live on the step grid: r_j = r_min_j + t_j * step
    std::vector<long> t(F, 0);
    std::vector<int> count_kj(static_cast<size_t>(K) * F);
    std::vector<int> total_count(F);
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < F; ++j)
            count_kj[static_cast<size_t>(k) * F + j] = placement.count(k, j);
    for (int j = 0; j < F; ++j) total_count[j] = placement.total_count(j);

    auto rate_at = [&](int j, long tj) { return sc.files[j].r_min + tj * step; };
    auto loads_at = [&](std::vector<double>& out) {
        for (int k = 0; k < K; ++k) {
            double lk = 0.0;
            for (int j = 0; j < F; ++j)
                lk += count_kj[static_cast<size_t>(k) * F + j] *
                      rate_at(j, t[j]) * sc.duration_s / n;
            out[k] = lk;
        }
    };
    auto q_of_file = [&](int j, long tj) {
        const VideoFile& f = sc.files[j];
        const double rate = rate_at(j, tj);
        const double fq = encoding_quality(f, rate * sc.duration_s, sc.duration_s);
        const double uncached = (n - total_count[j]) * rate * sc.duration_s / n;
        const double y = f.popularity * std::max(0.0, uncached) / sc.backhaul_rate_mbps;
        return fq - f.v * std::pow(y, 2.0 / 3.0);
    };

    std::vector<double> loads(K);
    loads_at(loads);
    for (long p = 0; p < n1; ++p) {
        int best_f = -1;
        double best_dq = 0.0;
        for (int j = 0; j < static_cast<int>(n2); ++j) {
            if (rate_at(j, t[j] + 1) > sc.files[j].r_max + 1e-12) continue;
            ++counters.greedy_evaluations;
            const double ds = step * sc.duration_s / n;  // per-packet growth
            bool fits = true;
            for (int k = 0; k < K; ++k)
                if (loads[k] + count_kj[static_cast<size_t>(k) * F + j] * ds >
                    sc.capacities_mb[k] + 1e-9) {
                    fits = false;
                    break;
                }
            if (!fits) continue;
            const double dq = q_of_file(j, t[j] + 1) - q_of_file(j, t[j]);
            if (dq > best_dq + 1e-12) {
                best_dq = dq;
                best_f = j;
            }
        }
        if (best_f < 0) break;
        t[best_f] += 1;
        loads_at(loads);
        ++counters.greedy_steps;
    }

    for (int j = 0; j < F; ++j) rates[j] = rate_at(j, t[j]);
    EncodingPlan plan = EncodingPlan::equal_split(rates, sc.duration_s, n);
    SolveResult res = finalize_result(sc, std::move(placement), std::move(plan),
                                      "greedy-ec-ve");
    res.counters = counters;
    res.step_overridden = options.step_override_mbps > 0.0;
    return res;
}

}  // namespace evc
