#include "evc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evc/greedy_solver.hpp"

namespace evc {

std::vector<double> fixed_rates(const Scenario& sc, int divisor) {
    std::vector<double> rates(sc.num_files());
    for (int j = 0; j < sc.num_files(); ++j) {
        const VideoFile& f = sc.files[j];
        rates[j] = divisor <= 0 ? f.r_min : f.r_min + (f.r_max - f.r_min) / divisor;
    }
    return rates;
}

SolveResult solve_ecst(const Scenario& sc, const std::vector<double>& rates) {
    sc.validate();
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    if (static_cast<int>(rates.size()) != F)
        throw std::invalid_argument("solve_ecst: rates length mismatch");
    for (int j = 0; j < F; ++j)
        if (rates[j] < sc.files[j].r_min - 1e-9 || rates[j] > sc.files[j].r_max + 1e-9)
            throw std::invalid_argument("solve_ecst: rate outside [r_min, r_max]");

    const EncodingPlan plan = EncodingPlan::equal_split(rates, sc.duration_s, n);
    SolveResult infeasible;
    infeasible.status = SolveStatus::infeasible;
    infeasible.scheme = "ecst";
    infeasible.placement = Placement(K, n, F);
    infeasible.plan = plan;

    // equal per-server counts: c_j packets of file j on every server
    const int cap_count = n / K;
    std::vector<int> c(F);
    std::vector<double> size(F);
    double load = 0.0;  // identical on every server
    for (int j = 0; j < F; ++j) {
        size[j] = rates[j] * sc.duration_s / n;
        const int need = min_secure_packets(n, sc.files[j].requests);
        c[j] = (need + K - 1) / K;
        if (c[j] > cap_count) return infeasible;
        load += c[j] * size[j];
    }
    const double phi_min = *std::min_element(sc.capacities_mb.begin(),
                                             sc.capacities_mb.end());
    if (load > phi_min + 1e-9) return infeasible;

    // fill by descending Psi_j * size contribution
    while (true) {
        int pick = -1;
        double best_score = 0.0;
        for (int j = 0; j < F; ++j) {
            if (c[j] >= cap_count) continue;
            if (load + size[j] > phi_min + 1e-9) continue;
            const double score = sc.files[j].requests * size[j];
            if (score > best_score + 1e-15) {
                best_score = score;
                pick = j;
            }
        }
        if (pick < 0) break;
        c[pick] += 1;
        load += size[pick];
    }

    Placement placement(K, n, F);
    for (int j = 0; j < F; ++j)
        for (int k = 0; k < K; ++k)
            for (int i = k * c[j]; i < (k + 1) * c[j]; ++i)
                placement.set(k, i, j, true);

    SolveResult res = finalize_result(sc, std::move(placement), plan, "ecst");
    res.counters.variable_dimension = static_cast<long>(K) * n * F;
    return res;
}

SolveResult solve_ec_only(const Scenario& sc, const BnbOptions& options) {
    sc.validate();
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    SolveCounters counters;
    counters.variable_dimension = static_cast<long>(K) * n * F;

    std::vector<double> rates(F);
    for (int j = 0; j < F; ++j) rates[j] = sc.files[j].r_min;
    auto placement = solve_caching_fixed_rates(sc, rates, options, &counters);
    if (!placement) {
        SolveResult res;
        res.status = SolveStatus::infeasible;
        res.scheme = "ec";
        res.counters = counters;
        res.placement = Placement(K, n, F);
        res.plan = EncodingPlan(n, F);
        return res;
    }
    SolveResult res = finalize_result(
        sc, std::move(*placement),
        EncodingPlan::equal_split(rates, sc.duration_s, n), "ec");
    res.counters = counters;
    return res;
}

SolveResult solve_ve_only(const Scenario& sc) {
    sc.validate();
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    SolveResult infeasible;
    infeasible.status = SolveStatus::infeasible;
    infeasible.scheme = "ve";
    infeasible.placement = Placement(K, n, F);
    infeasible.plan = EncodingPlan(n, F);

    double total_cap = 0.0;
    for (double phi : sc.capacities_mb) total_cap += phi;
    std::vector<double> suffix_min(F + 1, 0.0);
    for (int j = F - 1; j >= 0; --j)
        suffix_min[j] = suffix_min[j + 1] + sc.files[j].r_min * sc.duration_s;
    if (suffix_min[0] > total_cap + 1e-9) return infeasible;

    // everything is cached, so g = 0 and each file takes the largest rate
    // the remaining total capacity allows (in popularity order)
    std::vector<double> rates(F);
    double remaining = total_cap;
    for (int j = 0; j < F; ++j) {
        const VideoFile& f = sc.files[j];
        const double budget_mb = remaining - suffix_min[j + 1];
        rates[j] = std::clamp(budget_mb / sc.duration_s, f.r_min, f.r_max);
        remaining -= rates[j] * sc.duration_s;
    }
    const EncodingPlan plan = EncodingPlan::equal_split(rates, sc.duration_s, n);

    // first-fit packing of every packet by server index
    Placement placement(K, n, F);
    std::vector<double> room = sc.capacities_mb;
    for (int j = 0; j < F; ++j)
        for (int i = 0; i < n; ++i) {
            int placed = -1;
            for (int k = 0; k < K; ++k)
                if (room[k] >= plan.size(i, j) - 1e-9) {
                    placed = k;
                    break;
                }
            if (placed < 0) return infeasible;
            room[placed] -= plan.size(i, j);
            placement.set(placed, i, j, true);
        }

    SolveResult res = finalize_result(sc, std::move(placement), plan, "ve");
    res.counters.variable_dimension = static_cast<long>(n) * F;
    return res;
}

}  // namespace evc
