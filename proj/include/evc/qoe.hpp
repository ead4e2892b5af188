// Objective and constraint evaluation: encoding-quality MOS polynomial,
// latency penalty, backhaul packet counts, the secure-transmission bound,
// and the full feasibility report for a (placement, plan) pair.
#pragma once

#include <vector>

#include "evc/types.hpp"

namespace evc {

struct FeasibilityReport {
    std::vector<bool> capacity_ok;      // per server
    bool no_duplication_ok = false;     // sum_k m_kj <= n for every file
    std::vector<bool> security_ok;      // per file
    std::vector<bool> rate_ok;          // per file
    bool binary_ok = false;
    std::vector<double> capacity_slack_mb;   // Phi_k - load_k
    std::vector<double> security_slack;      // sum_k m_kj - rhs_j
    std::vector<double> rate_slack_mbps;     // min(r - r_min, r_max - r)

    bool feasible() const;
};

struct ObjectiveBreakdown {
    std::vector<double> encoding_quality;  // f_j
    std::vector<double> latency_penalty;   // g_j
    std::vector<double> qoe;               // q_j = f_j - g_j
    double total = 0.0;                    // Q
    double mean_mos = 0.0;                 // Q / F
};

// f: cubic MOS polynomial evaluated at rate = total_size / T_d (Mbps).
// Evaluated raw, even outside [r_min, r_max]; no clamping to the MOS scale.
double encoding_quality(const VideoFile& file, double total_size_mb, double duration_s);

// g: v * [p_j * uncached_volume / R_bk]^(2/3); uncached volume is clamped
// at 0 before exponentiation.
double latency_penalty(const VideoFile& file, const Placement& placement,
                       const EncodingPlan& plan, double backhaul_rate_mbps);

// P_j = Psi_j * (n - min(n, sum_k m_kj)).
double backhaul_packets(const Scenario& scenario, const Placement& placement, int j);

// Right-hand side of the secure-transmission bound: n*(1 - 1/psi) + 1/psi.
double security_rhs(int packets_per_file, double requests);

// Smallest integer cached-packet count satisfying the bound, clamped to [0, n].
// requests <= 0 throws std::invalid_argument.
int min_secure_packets(int packets_per_file, double requests);

// Uncached volume of file j (Mb), clamped at >= 0: sum_i s_ij - sum_ik m~*s.
double uncached_volume(const Placement& placement, const EncodingPlan& plan, int j);

// Cached load of server k in Mb.
double server_load(const Placement& placement, const EncodingPlan& plan, int k);

FeasibilityReport check_feasibility(const Scenario& scenario,
                                    const Placement& placement,
                                    const EncodingPlan& plan);

ObjectiveBreakdown objective(const Scenario& scenario, const Placement& placement,
                             const EncodingPlan& plan);

// Plain transfer time sum_j p_j * uncached_j / R_bk in seconds (the sweep
// figure quantity; the 2/3-power MOS mapping stays inside the objective).
double transfer_latency_seconds(const Scenario& scenario, const Placement& placement,
                                const EncodingPlan& plan);

}  // namespace evc
