// Command-line front end: single solves, experiment sweeps, minimum-capacity
// search and oracle cross-checks. Exit code 0 on success, 2 when the
// requested instance is infeasible, 1 on errors.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "evc/config_io.hpp"
#include "evc/oracle.hpp"

namespace {

int write_out(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return 1;
    }
    out << text;
    return 0;
}

void print_result(const evc::Scenario& sc, const evc::SolveResult& res) {
    if (res.status != evc::SolveStatus::feasible) {
        std::cout << res.scheme << ": infeasible\n";
        return;
    }
    std::printf("%s: feasible  mean MOS %.6g  total Q %.6g  latency %.6g s\n",
                res.scheme.c_str(), res.mean_mos(), res.q,
                evc::transfer_latency_seconds(sc, res.placement, res.plan));
    std::printf("  rates (Mbps):");
    for (int j = 0; j < sc.num_files(); ++j)
        std::printf(" %.6g", res.plan.rate_mbps(j, sc.duration_s));
    std::printf("\n  cached packets:");
    for (int j = 0; j < sc.num_files(); ++j)
        std::printf(" %d", res.placement.total_count(j));
    std::printf("\n  counters: %ld relaxed solves, %ld branch steps, %ld greedy steps\n",
                res.counters.relaxed_solves, res.counters.branch_steps,
                res.counters.greedy_steps);
    if (res.step_overridden)
        std::printf("  note: greedy rate step overridden from the 1/(T_d*n) default\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QoE-driven secure edge caching and video encoding solver"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    std::string out_path;
    double step_mbps = 0.0;
    app.add_option("--seed", seed, "RNG seed shared by every solver");
    app.add_option("--out", out_path, "write results as CSV to this path");
    app.add_option("--step", step_mbps, "greedy rate step override (Mbps)");

    std::string config_path, scheme = "ec-ve";
    auto* solve = app.add_subcommand("solve", "solve one instance");
    solve->add_option("config", config_path, "scenario config (JSON)")->required();
    solve->add_option("--scheme", scheme,
                      "ec-ve | greedy-ec-ve | ecst | ec | ve");

    std::string spec_path;
    auto* sweep = app.add_subcommand("sweep", "run an experiment sweep");
    sweep->add_option("spec", spec_path, "sweep spec (JSON)")->required();

    double resolution = 1.0;
    std::string mc_config, mc_scheme = "ec-ve";
    auto* mincap = app.add_subcommand("min-capacity",
                                      "smallest feasible uniform capacity");
    mincap->add_option("config", mc_config, "scenario config (JSON)")->required();
    mincap->add_option("--scheme", mc_scheme, "scheme name");
    mincap->add_option("--resolution", resolution, "capacity resolution (Mb)");

    int grid = 11;
    std::string oc_config;
    auto* oracle = app.add_subcommand("oracle-check",
                                      "exhaustive check on a tiny instance");
    oracle->add_option("config", oc_config, "scenario config (JSON)")->required();
    oracle->add_option("--grid", grid, "rate grid points per file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            const evc::ScenarioConfig cfg = evc::load_scenario_config(config_path);
            const evc::Scenario sc = evc::build_scenario(cfg);
            evc::HarnessOptions opt;
            opt.seed = seed;
            opt.greedy_step_mbps = step_mbps;
            const evc::SolveResult res = evc::run_scheme(sc, scheme, opt);
            print_result(sc, res);
            if (!out_path.empty()) {
                const evc::ResultRow row =
                    evc::row_from_result(sc, sc.capacities_mb[0], res);
                if (int rc = write_out(out_path, evc::to_csv({row}))) return rc;
            }
            return res.status == evc::SolveStatus::feasible ? 0 : 2;
        }
        if (sweep->parsed()) {
            evc::SweepSpec spec = evc::load_sweep_spec(spec_path);
            spec.options.seed = seed;
            if (step_mbps > 0.0) spec.options.greedy_step_mbps = step_mbps;
            const auto rows = evc::run_sweep(spec);
            const std::string csv = evc::to_csv(rows);
            if (!out_path.empty()) {
                if (int rc = write_out(out_path, csv)) return rc;
            }
            std::cout << csv;
            return 0;
        }
        if (mincap->parsed()) {
            const evc::ScenarioConfig cfg = evc::load_scenario_config(mc_config);
            evc::HarnessOptions opt;
            opt.seed = seed;
            if (step_mbps > 0.0) opt.greedy_step_mbps = step_mbps;
            const auto cap = evc::min_capacity(cfg, mc_scheme, resolution, opt);
            if (!cap) {
                std::cout << mc_scheme << ": infeasible at every probed capacity\n";
                return 2;
            }
            std::printf("%s: minimum capacity %.6g Mb (resolution %.6g)\n",
                        mc_scheme.c_str(), *cap, resolution);
            if (!out_path.empty()) {
                char buf[128];
                std::snprintf(buf, sizeof(buf), "scheme,min_capacity_mb\n%s,%.6g\n",
                              mc_scheme.c_str(), *cap);
                if (int rc = write_out(out_path, buf)) return rc;
            }
            return 0;
        }
        if (oracle->parsed()) {
            const evc::ScenarioConfig cfg = evc::load_scenario_config(oc_config);
            const evc::Scenario sc = evc::build_scenario(cfg);
            evc::HarnessOptions opt;
            opt.seed = seed;
            const evc::SolveResult exact = evc::oracle_solve(sc, grid);
            const evc::SolveResult ecve = evc::run_scheme(sc, "ec-ve", opt);
            print_result(sc, exact);
            print_result(sc, ecve);
            if (exact.status == evc::SolveStatus::feasible &&
                ecve.status == evc::SolveStatus::feasible) {
                const evc::SolveResult snapped = evc::snap_to_grid(sc, ecve, grid);
                std::printf("gap (oracle Q - snapped ec-ve Q): %.6g\n",
                            exact.q - snapped.q);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
