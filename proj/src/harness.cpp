#include "evc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace evc {

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::capacity: return "capacity";
        case SweepAxis::num_files: return "num_files";
        case SweepAxis::num_packets: return "num_packets";
        case SweepAxis::num_servers: return "num_servers";
        case SweepAxis::total_requests: return "total_requests";
    }
    return "?";
}

SweepAxis axis_from_name(const std::string& name) {
    if (name == "capacity") return SweepAxis::capacity;
    if (name == "num_files") return SweepAxis::num_files;
    if (name == "num_packets") return SweepAxis::num_packets;
    if (name == "num_servers") return SweepAxis::num_servers;
    if (name == "total_requests") return SweepAxis::total_requests;
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

BnbOptions HarnessOptions::bnb() const {
    BnbOptions opt;
    opt.relax.n_starts = n_starts;
    opt.relax.seed = seed;
    opt.relax.tol_constraint = tol_constraint;
    opt.relax.tol_grad = tol_grad;
    opt.relax.max_inner_iters = max_inner_iters;
    opt.relax.smoothing_eps = smoothing_eps;
    opt.branch_starts = branch_starts;
    return opt;
}

GreedyOptions HarnessOptions::greedy() const {
    GreedyOptions opt;
    opt.bnb = bnb();
    opt.step_override_mbps = greedy_step_mbps;
    return opt;
}

SolveResult run_scheme(const Scenario& sc, const std::string& scheme,
                       const HarnessOptions& options) {
    if (scheme == "ec-ve") return solve_ec_ve(sc, options.bnb());
    if (scheme == "greedy-ec-ve") return solve_greedy_ec_ve(sc, options.greedy());
    if (scheme == "ecst")
        return solve_ecst(sc, fixed_rates(sc, options.ecst_rate_divisor));
    if (scheme == "ec") return solve_ec_only(sc, options.bnb());
    if (scheme == "ve") return solve_ve_only(sc);
    throw std::invalid_argument("unknown scheme '" + scheme + "'");
}

ResultRow row_from_result(const Scenario& sc, double axis_value,
                          const SolveResult& result) {
    ResultRow row;
    row.axis_value = axis_value;
    row.scheme = result.scheme;
    row.feasible = result.status == SolveStatus::feasible;
    if (row.feasible) {
        row.mean_mos = result.mean_mos();
        row.total_q = result.q;
        row.latency_s = transfer_latency_seconds(sc, result.placement, result.plan);
    }
    row.relaxed_solves = result.counters.relaxed_solves;
    row.branch_steps = result.counters.branch_steps;
    row.greedy_steps = result.counters.greedy_steps;
    return row;
}

namespace {

ScenarioConfig config_at(const SweepSpec& spec, size_t idx) {
    ScenarioConfig cfg = spec.scenario;
    const double value = spec.values[idx];
    switch (spec.axis) {
        case SweepAxis::capacity:
            cfg.capacities_mb.assign(cfg.num_servers ? cfg.num_servers : 1, value);
            if (cfg.num_servers == 0) cfg.num_servers = 1;
            break;
        case SweepAxis::num_files: {
            const int F = static_cast<int>(value);
            if (F <= 0 || F % 4 != 0)
                throw std::invalid_argument(
                    "num_files sweep values must be positive multiples of 4");
            if (cfg.classes.size() != 3)
                throw std::invalid_argument(
                    "num_files sweep needs a 3-class scenario palette");
            cfg.classes[0].count = F / 2;
            cfg.classes[1].count = F / 4;
            cfg.classes[2].count = F / 4;
            cfg.num_files = F;
            cfg.file_classes.reset();
            cfg.backhaul_rate_mbps = 10000.0 / F;
            break;
        }
        case SweepAxis::num_packets:
            cfg.packets_per_file = static_cast<int>(value);
            break;
        case SweepAxis::num_servers: {
            const int K = static_cast<int>(value);
            if (idx >= spec.capacity_vectors.size())
                throw std::invalid_argument(
                    "num_servers sweep needs one capacity vector per axis value");
            cfg.num_servers = K;
            cfg.capacities_mb = spec.capacity_vectors[idx];
            break;
        }
        case SweepAxis::total_requests:
            cfg.total_requests = value;
            break;
    }
    return cfg;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
    if (spec.values.empty())
        throw std::invalid_argument("sweep: axis values must be non-empty");
    for (size_t i = 1; i < spec.values.size(); ++i)
        if (spec.values[i] <= spec.values[i - 1])
            throw std::invalid_argument("sweep: axis values must be strictly increasing");
    if (spec.values.front() <= 0.0)
        throw std::invalid_argument("sweep: axis values must be positive");

    std::vector<ResultRow> rows;
    for (size_t idx = 0; idx < spec.values.size(); ++idx) {
        const Scenario sc = build_scenario(config_at(spec, idx));
        for (const std::string& scheme : spec.schemes) {
            const SolveResult result = run_scheme(sc, scheme, spec.options);
            rows.push_back(row_from_result(sc, spec.values[idx], result));
        }
    }
    return rows;
}

std::optional<double> min_capacity(const ScenarioConfig& config,
                                   const std::string& scheme, double resolution_mb,
                                   const HarnessOptions& options) {
    if (resolution_mb <= 0.0)
        throw std::invalid_argument("min_capacity: resolution must be > 0");

    ScenarioConfig cfg = config;
    auto probe = [&](double capacity) {
        cfg.capacities_mb.assign(cfg.num_servers, capacity);
        const Scenario sc = build_scenario(cfg);
        return run_scheme(sc, scheme, options).status == SolveStatus::feasible;
    };

    // bracket: twice the all-max-rates catalog size
    const Scenario base = build_scenario(config);
    double upper = 0.0;
    for (const VideoFile& f : base.files) upper += f.r_max * base.duration_s;
    upper *= 2.0;

    long hi = static_cast<long>(std::ceil(upper / resolution_mb));
    if (!probe(hi * resolution_mb)) return std::nullopt;
    if (probe(0.0)) return 0.0;
    long lo = 0;
    for (int it = 0; it < 64 && hi - lo > 1; ++it) {
        const long mid = lo + (hi - lo) / 2;
        if (probe(mid * resolution_mb))
            hi = mid;
        else
            lo = mid;
    }
    return hi * resolution_mb;
}

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out =
        "axis_value,scheme,status,mean_mos,total_q,latency_s,"
        "relaxed_solves,branch_steps,greedy_steps\n";
    for (const ResultRow& r : rows) {
        out += fmt6(r.axis_value);
        out += ',';
        out += r.scheme;
        out += ',';
        out += r.feasible ? "feasible" : "infeasible";
        out += ',';
        if (r.feasible) {
            out += fmt6(r.mean_mos);
            out += ',';
            out += fmt6(r.total_q);
            out += ',';
            out += fmt6(r.latency_s);
        } else {
            out += ",,";
        }
        out += ',';
        out += std::to_string(r.relaxed_solves);
        out += ',';
        out += std::to_string(r.branch_steps);
        out += ',';
        out += std::to_string(r.greedy_steps);
        out += '\n';
    }
    return out;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
    std::vector<ResultRow> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        while (cells.size() < 9) cells.emplace_back();
        ResultRow r;
        r.axis_value = std::stod(cells[0]);
        r.scheme = cells[1];
        r.feasible = cells[2] == "feasible";
        if (r.feasible) {
            r.mean_mos = std::stod(cells[3]);
            r.total_q = std::stod(cells[4]);
            r.latency_s = std::stod(cells[5]);
        }
        r.relaxed_solves = std::stol(cells[6]);
        r.branch_steps = std::stol(cells[7]);
        r.greedy_steps = std::stol(cells[8]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace evc
