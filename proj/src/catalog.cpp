#include "evc/catalog.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evc {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("catalog: field '" + field + "' " + why);
}

}  // namespace

std::vector<double> zipf_popularity(int num_files, double theta) {
    if (num_files < 1) throw std::invalid_argument("zipf_popularity: F must be >= 1");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("zipf_popularity: theta must lie in (0,1)");
    std::vector<double> w(num_files);
    for (int j = 0; j < num_files; ++j)
        w[j] = std::pow(static_cast<double>(j + 1), -theta);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return w;
}

Scenario build_scenario(const ScenarioConfig& config) {
    if (config.packets_per_file < 1) fail("n", "must be >= 1");
    if (config.num_servers < 1) fail("K", "must be >= 1");
    if (static_cast<int>(config.capacities_mb.size()) != config.num_servers)
        fail("capacities_mb", "length must equal K");
    for (double phi : config.capacities_mb)
        if (phi < 0.0) fail("capacities_mb", "entries must be >= 0");
    if (config.duration_s <= 0.0) fail("T_d_s", "must be > 0");
    if (config.backhaul_rate_mbps <= 0.0) fail("R_bk_mbps", "must be > 0");
    if (config.total_requests <= 0.0) fail("total_requests", "must be > 0");
    if (config.classes.empty()) fail("classes", "must be non-empty");

    for (size_t c = 0; c < config.classes.size(); ++c) {
        const ClassSpec& cs = config.classes[c];
        if (cs.r_min <= 0.0) fail("classes[" + std::to_string(c) + "].r_min", "must be > 0");
        if (cs.r_min > cs.r_max)
            fail("classes[" + std::to_string(c) + "].r_max", "must be >= r_min");
    }

    // Resolve the per-file class assignment.
    std::vector<int> assignment;  // 0-based class index per file
    if (config.file_classes.has_value()) {
        for (int c : *config.file_classes) {
            if (c < 1 || c > static_cast<int>(config.classes.size()))
                fail("file_classes", "entries must be 1-based class indices");
            assignment.push_back(c - 1);
        }
    } else {
        for (size_t c = 0; c < config.classes.size(); ++c) {
            if (config.classes[c].count < 0)
                fail("classes[" + std::to_string(c) + "].count", "must be >= 0");
            assignment.insert(assignment.end(), config.classes[c].count,
                              static_cast<int>(c));
        }
    }
    const int F = static_cast<int>(assignment.size());
    if (F < 1) fail("classes", "must yield at least one file");
    if (config.num_files != 0 && config.num_files != F)
        fail("F", "does not match the class assignment length");

    Scenario sc;
    sc.packets_per_file = config.packets_per_file;
    sc.num_servers = config.num_servers;
    sc.capacities_mb = config.capacities_mb;
    sc.duration_s = config.duration_s;
    sc.backhaul_rate_mbps = config.backhaul_rate_mbps;
    sc.total_requests = config.total_requests;
    sc.theta = config.theta;

    const std::vector<double> p = zipf_popularity(F, config.theta);
    sc.files.resize(F);
    for (int j = 0; j < F; ++j) {
        const ClassSpec& cs = config.classes[assignment[j]];
        VideoFile& f = sc.files[j];
        f.index = j + 1;
        f.r_min = cs.r_min;
        f.r_max = cs.r_max;
        f.c1 = cs.c1;
        f.c2 = cs.c2;
        f.c3 = cs.c3;
        f.c4 = cs.c4;
        f.v = cs.v;
        f.popularity = p[j];
        f.requests = config.total_requests * p[j];
    }
    sc.validate();
    return sc;
}

std::vector<double> requests_per_file(const Scenario& scenario) {
    std::vector<double> psi(scenario.files.size());
    for (size_t j = 0; j < psi.size(); ++j)
        psi[j] = scenario.total_requests * scenario.files[j].popularity;
    return psi;
}

ScenarioConfig table1_config(int num_files, int packets_per_file, int num_servers,
                             double capacity_mb, double total_requests) {
    if (num_files % 4 != 0)
        throw std::invalid_argument("table1_config: F must be divisible by 4");
    ScenarioConfig cfg;
    cfg.num_files = num_files;
    cfg.packets_per_file = packets_per_file;
    cfg.num_servers = num_servers;
    cfg.capacities_mb.assign(num_servers, capacity_mb);
    cfg.duration_s = 2400.0;
    cfg.backhaul_rate_mbps = 10000.0 / num_files;
    cfg.total_requests = total_requests;
    cfg.theta = 0.8;
    cfg.classes = {
        {num_files / 2, 0.3, 0.7, 0.23, -1.5, 3.3, 2.5, 0.99},
        {num_files / 4, 1.0, 4.0, 0.0426, -0.4466, 1.6369, 1.8415, 0.99},
        {num_files / 4, 4.0, 8.0, 0.0027, -0.0669, 0.5842, 2.5248, 0.99},
    };
    return cfg;
}

void Scenario::validate() const {
    if (files.empty()) throw std::invalid_argument("scenario: files must be non-empty");
    if (packets_per_file < 1) throw std::invalid_argument("scenario: n must be >= 1");
    if (num_servers < 1) throw std::invalid_argument("scenario: K must be >= 1");
    if (static_cast<int>(capacities_mb.size()) != num_servers)
        throw std::invalid_argument("scenario: capacities_mb length must equal K");
    for (double phi : capacities_mb)
        if (phi < 0.0) throw std::invalid_argument("scenario: capacities must be >= 0");
    if (duration_s <= 0.0) throw std::invalid_argument("scenario: T_d must be > 0");
    if (backhaul_rate_mbps <= 0.0)
        throw std::invalid_argument("scenario: R_bk must be > 0");
    if (total_requests <= 0.0)
        throw std::invalid_argument("scenario: total_requests must be > 0");

    double psum = 0.0;
    for (size_t j = 0; j < files.size(); ++j) {
        const VideoFile& f = files[j];
        if (!(f.r_min > 0.0) || f.r_min > f.r_max)
            throw std::invalid_argument("scenario: rate bounds of file " +
                                        std::to_string(j + 1) + " invalid");
        if (j > 0 && files[j - 1].popularity < f.popularity - 1e-15)
            throw std::invalid_argument("scenario: popularity must be non-increasing");
        psum += f.popularity;
    }
    if (std::abs(psum - 1.0) > 1e-12)
        throw std::invalid_argument("scenario: popularity must sum to 1");
}

EncodingPlan EncodingPlan::equal_split(const std::vector<double>& rates_mbps,
                                       double duration_s, int packets_per_file) {
    EncodingPlan plan(packets_per_file, static_cast<int>(rates_mbps.size()));
    for (int j = 0; j < plan.files(); ++j) {
        const double s = rates_mbps[j] * duration_s / packets_per_file;
        for (int i = 0; i < packets_per_file; ++i) plan.set(i, j, s);
    }
    return plan;
}

}  // namespace evc
