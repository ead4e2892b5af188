#include "evc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace evc {

namespace {

double grid_rate(const VideoFile& f, int l, int grid) {
    if (grid == 1) return f.r_min;
    return f.r_min + (f.r_max - f.r_min) * l / (grid - 1);
}

}  // namespace

SolveResult oracle_solve(const Scenario& sc, int rate_grid_points) {
    sc.validate();
    if (rate_grid_points < 1)
        throw std::invalid_argument("oracle_solve: rate_grid_points must be >= 1");
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    const int bits = K * n * F;
    if (bits > 22)
        throw std::invalid_argument("oracle_solve: K*n*F exceeds the enumeration budget");
    double combos_d = 1.0;
    for (int j = 0; j < F; ++j) combos_d *= rate_grid_points;
    if (std::ldexp(combos_d, bits) > 1e9)
        throw std::invalid_argument("oracle_solve: lattice too large");

    const long long masks = 1LL << bits;
    long long combos = 1;
    for (int j = 0; j < F; ++j) combos *= rate_grid_points;

    // per (file, grid point): size and f; per (file, total count, grid point): q
    const int G = rate_grid_points;
    std::vector<double> size(static_cast<size_t>(F) * G), fval(size.size());
    std::vector<double> qval(static_cast<size_t>(F) * (n + 1) * G);
    for (int j = 0; j < F; ++j) {
        const VideoFile& f = sc.files[j];
        for (int l = 0; l < G; ++l) {
            const double r = grid_rate(f, l, G);
            size[static_cast<size_t>(j) * G + l] = r * sc.duration_s / n;
            fval[static_cast<size_t>(j) * G + l] =
                encoding_quality(f, r * sc.duration_s, sc.duration_s);
            for (int c = 0; c <= n; ++c) {
                const double uncached = (n - c) * r * sc.duration_s / n;
                const double y = f.popularity * uncached / sc.backhaul_rate_mbps;
                qval[(static_cast<size_t>(j) * (n + 1) + c) * G + l] =
                    fval[static_cast<size_t>(j) * G + l] -
                    f.v * std::pow(std::max(0.0, y), 2.0 / 3.0);
            }
        }
    }
    std::vector<int> min_count(F);
    for (int j = 0; j < F; ++j)
        min_count[j] = min_secure_packets(n, sc.files[j].requests);

    double best_q = 0.0;
    long long best_mask = -1;
    std::vector<int> best_l(F, 0);

    std::vector<int> count(static_cast<size_t>(K) * F);
    std::vector<int> total(F);
    std::vector<int> l(F);
    for (long long mask = 0; mask < masks; ++mask) {
        std::fill(count.begin(), count.end(), 0);
        std::fill(total.begin(), total.end(), 0);
        for (int b = 0; b < bits; ++b)
            if (mask >> b & 1) {
                const int j = b % F;
                const int k = b / (n * F);
                count[static_cast<size_t>(k) * F + j] += 1;
                total[j] += 1;
            }
        bool counts_ok = true;
        for (int j = 0; j < F; ++j)
            if (total[j] > n || total[j] < min_count[j]) {
                counts_ok = false;
                break;
            }
        if (!counts_ok) continue;

        std::fill(l.begin(), l.end(), 0);
        for (long long c = 0; c < combos; ++c) {
            bool fits = true;
            for (int k = 0; k < K && fits; ++k) {
                double load = 0.0;
                for (int j = 0; j < F; ++j)
                    load += count[static_cast<size_t>(k) * F + j] *
                            size[static_cast<size_t>(j) * G + l[j]];
                fits = load <= sc.capacities_mb[k] + 1e-9;
            }
            if (fits) {
                double q = 0.0;
                for (int j = 0; j < F; ++j)
                    q += qval[(static_cast<size_t>(j) * (n + 1) + total[j]) * G + l[j]];
                if (best_mask < 0 || q > best_q) {
                    best_q = q;
                    best_mask = mask;
                    best_l = l;
                }
            }
            // odometer
            for (int j = F - 1; j >= 0; --j) {
                if (++l[j] < G) break;
                l[j] = 0;
            }
        }
    }

    SolveResult res;
    res.scheme = "oracle";
    res.counters.oracle_points = masks * combos;
    if (best_mask < 0) {
        res.status = SolveStatus::infeasible;
        res.placement = Placement(K, n, F);
        res.plan = EncodingPlan(n, F);
        return res;
    }
    Placement placement(K, n, F);
    for (int b = 0; b < bits; ++b)
        if (best_mask >> b & 1) {
            const int j = b % F;
            const int i = (b / F) % n;
            const int k = b / (n * F);
            placement.set(k, i, j, true);
        }
    std::vector<double> rates(F);
    for (int j = 0; j < F; ++j) rates[j] = grid_rate(sc.files[j], best_l[j], G);
    EncodingPlan plan = EncodingPlan::equal_split(rates, sc.duration_s, n);
    res = finalize_result(sc, std::move(placement), std::move(plan), "oracle");
    res.counters.oracle_points = masks * combos;
    return res;
}

SolveResult snap_to_grid(const Scenario& sc, const SolveResult& result,
                         int rate_grid_points) {
    const int n = sc.packets_per_file, F = sc.num_files();
    const int G = rate_grid_points;
    std::vector<double> rates(F);
    for (int j = 0; j < F; ++j) {
        const VideoFile& f = sc.files[j];
        double r = result.plan.rate_mbps(j, sc.duration_s);
        int l = 0;
        if (G > 1 && f.r_max > f.r_min) {
            const double step = (f.r_max - f.r_min) / (G - 1);
            l = static_cast<int>(std::floor((r - f.r_min) / step + 1e-9));
            l = std::clamp(l, 0, G - 1);
        }
        rates[j] = grid_rate(f, l, G);
    }
    return finalize_result(sc, result.placement,
                           EncodingPlan::equal_split(rates, sc.duration_s, n),
                           result.scheme + "-snapped");
}

}  // namespace evc
