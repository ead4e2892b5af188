// Scenario construction: Zipf popularity, per-class rate ranges and MOS
// coefficients, request counts.
#pragma once

#include <optional>
#include <vector>

#include "evc/types.hpp"

namespace evc {

// Zipf probabilities p_j proportional to j^(-theta), normalized.
// Requires F >= 1 and theta in (0,1); throws std::invalid_argument otherwise.
std::vector<double> zipf_popularity(int num_files, double theta);

struct ClassSpec {
    int count = 0;
    double r_min = 0.0;
    double r_max = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    double v = 0.0;
};

struct ScenarioConfig {
    int num_files = 0;                  // F; 0 means "derive from class counts"
    int packets_per_file = 0;           // n
    int num_servers = 0;                // K
    std::vector<double> capacities_mb;  // length K
    double duration_s = 0.0;            // T_d
    double backhaul_rate_mbps = 0.0;    // R_bk
    double total_requests = 0.0;        // Psi
    double theta = 0.0;
    std::vector<ClassSpec> classes;
    // Optional explicit per-file class map (1-based indices into `classes`);
    // overrides the contiguous count-based assignment.
    std::optional<std::vector<int>> file_classes;
};

// Builds and validates a Scenario. File j gets the class owning rank j under
// the contiguous assignment (first classes[0].count files, then classes[1], ...).
// Throws std::invalid_argument naming the offending field.
Scenario build_scenario(const ScenarioConfig& config);

// Psi_j = Psi * p_j for every file.
std::vector<double> requests_per_file(const Scenario& scenario);

// Table I catalog with the canonical half/quarter/quarter class split.
// F must be divisible by 4. Capacity is uniform across servers.
ScenarioConfig table1_config(int num_files, int packets_per_file, int num_servers,
                             double capacity_mb, double total_requests);

}  // namespace evc
