#include "evc/qoe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evc {

namespace {

constexpr double kEps = 1e-9;  // float-noise guard on exact inequalities

void require_dims(const Scenario& sc, const Placement& placement,
                  const EncodingPlan& plan) {
    if (placement.servers() != sc.num_servers ||
        placement.packets() != sc.packets_per_file ||
        placement.files() != sc.num_files())
        throw std::invalid_argument("placement dimensions do not match scenario");
    if (plan.packets() != sc.packets_per_file || plan.files() != sc.num_files())
        throw std::invalid_argument("plan dimensions do not match scenario");
}

}  // namespace

bool FeasibilityReport::feasible() const {
    for (bool ok : capacity_ok)
        if (!ok) return false;
    for (bool ok : security_ok)
        if (!ok) return false;
    for (bool ok : rate_ok)
        if (!ok) return false;
    return no_duplication_ok && binary_ok;
}

double encoding_quality(const VideoFile& file, double total_size_mb, double duration_s) {
    const double r = total_size_mb / duration_s;
    return ((file.c1 * r + file.c2) * r + file.c3) * r + file.c4;
}

double uncached_volume(const Placement& placement, const EncodingPlan& plan, int j) {
    double total = 0.0, cached = 0.0;
    for (int i = 0; i < plan.packets(); ++i) {
        const double s = plan.size(i, j);
        total += s;
        for (int k = 0; k < placement.servers(); ++k)
            if (placement.cached(k, i, j)) cached += s;
    }
    return std::max(0.0, total - cached);
}

double latency_penalty(const VideoFile& file, const Placement& placement,
                       const EncodingPlan& plan, double backhaul_rate_mbps) {
    const int j = file.index - 1;
    const double u = uncached_volume(placement, plan, j);
    const double x = file.popularity * u / backhaul_rate_mbps;
    return file.v * std::pow(x, 2.0 / 3.0);
}

double backhaul_packets(const Scenario& scenario, const Placement& placement, int j) {
    const int n = scenario.packets_per_file;
    const int cached = std::min(n, placement.total_count(j));
    return scenario.files[j].requests * (n - cached);
}

double security_rhs(int packets_per_file, double requests) {
    return packets_per_file * (1.0 - 1.0 / requests) + 1.0 / requests;
}

int min_secure_packets(int packets_per_file, double requests) {
    if (packets_per_file < 1)
        throw std::invalid_argument("min_secure_packets: n must be >= 1");
    if (requests <= 0.0)
        throw std::invalid_argument("min_secure_packets: requests must be > 0");
    const double rhs = security_rhs(packets_per_file, requests);
    const int m = static_cast<int>(std::ceil(rhs - kEps));
    return std::clamp(m, 0, packets_per_file);
}

double server_load(const Placement& placement, const EncodingPlan& plan, int k) {
    double load = 0.0;
    for (int i = 0; i < placement.packets(); ++i)
        for (int j = 0; j < placement.files(); ++j)
            if (placement.cached(k, i, j)) load += plan.size(i, j);
    return load;
}

FeasibilityReport check_feasibility(const Scenario& scenario,
                                    const Placement& placement,
                                    const EncodingPlan& plan) {
    require_dims(scenario, placement, plan);
    const int F = scenario.num_files();
    const int n = scenario.packets_per_file;
    FeasibilityReport rep;

    rep.capacity_ok.resize(scenario.num_servers);
    rep.capacity_slack_mb.resize(scenario.num_servers);
    for (int k = 0; k < scenario.num_servers; ++k) {
        const double slack = scenario.capacities_mb[k] - server_load(placement, plan, k);
        rep.capacity_slack_mb[k] = slack;
        rep.capacity_ok[k] = slack >= -kEps;
    }

    rep.no_duplication_ok = true;
    rep.security_ok.resize(F);
    rep.security_slack.resize(F);
    rep.rate_ok.resize(F);
    rep.rate_slack_mbps.resize(F);
    for (int j = 0; j < F; ++j) {
        const int total = placement.total_count(j);
        if (total > n) rep.no_duplication_ok = false;
        const double rhs = security_rhs(n, scenario.files[j].requests);
        rep.security_slack[j] = total - rhs;
        rep.security_ok[j] = rep.security_slack[j] >= -kEps;
        const double r = plan.rate_mbps(j, scenario.duration_s);
        rep.rate_slack_mbps[j] =
            std::min(r - scenario.files[j].r_min, scenario.files[j].r_max - r);
        rep.rate_ok[j] = rep.rate_slack_mbps[j] >= -kEps;
    }
    rep.binary_ok = true;  // Placement stores 0/1 by construction
    return rep;
}

ObjectiveBreakdown objective(const Scenario& scenario, const Placement& placement,
                             const EncodingPlan& plan) {
    require_dims(scenario, placement, plan);
    const int F = scenario.num_files();
    ObjectiveBreakdown out;
    out.encoding_quality.resize(F);
    out.latency_penalty.resize(F);
    out.qoe.resize(F);
    for (int j = 0; j < F; ++j) {
        const VideoFile& file = scenario.files[j];
        out.encoding_quality[j] =
            encoding_quality(file, plan.file_total(j), scenario.duration_s);
        out.latency_penalty[j] =
            latency_penalty(file, placement, plan, scenario.backhaul_rate_mbps);
        out.qoe[j] = out.encoding_quality[j] - out.latency_penalty[j];
        out.total += out.qoe[j];
    }
    out.mean_mos = out.total / F;
    return out;
}

double transfer_latency_seconds(const Scenario& scenario, const Placement& placement,
                                const EncodingPlan& plan) {
    double t = 0.0;
    for (int j = 0; j < scenario.num_files(); ++j)
        t += scenario.files[j].popularity * uncached_volume(placement, plan, j) /
             scenario.backhaul_rate_mbps;
    return t;
}

}  // namespace evc
