// Core problem-instance types: video catalog entries, the scenario
// (catalog + servers + request model), packet placements and encoding plans.
// All types are immutable-by-convention after construction and safe to
// share across threads.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace evc {

// One video file, ranked by popularity (index is the 1-based rank).
struct VideoFile {
    int index = 0;           // 1-based popularity rank
    double r_min = 0.0;      // encoding rate lower bound (Mbps)
    double r_max = 0.0;      // encoding rate upper bound (Mbps)
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;  // MOS cubic coefficients
    double v = 0.0;          // latency weighting coefficient
    double popularity = 0.0; // request probability p_j
    double requests = 0.0;   // expected request count psi_j = total_requests * p_j
};

struct Scenario {
    std::vector<VideoFile> files;
    int packets_per_file = 0;            // n
    int num_servers = 0;                 // K
    std::vector<double> capacities_mb;   // Phi_k, length K
    double duration_s = 0.0;             // T_d
    double backhaul_rate_mbps = 0.0;     // R_bk
    double total_requests = 0.0;         // Psi
    double theta = 0.0;                  // Zipf tilt

    int num_files() const { return static_cast<int>(files.size()); }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Boolean cache assignment m~[k,i,j]; flat layout (k*n + i)*F + j.
class Placement {
public:
    Placement() = default;
    Placement(int num_servers, int packets_per_file, int num_files)
        : k_(num_servers), n_(packets_per_file), f_(num_files),
          bits_(static_cast<size_t>(num_servers) * packets_per_file * num_files, 0) {}

    int servers() const { return k_; }
    int packets() const { return n_; }
    int files() const { return f_; }

    bool cached(int k, int i, int j) const { return bits_[idx(k, i, j)] != 0; }
    void set(int k, int i, int j, bool value) { bits_[idx(k, i, j)] = value ? 1 : 0; }

    // m_kj: packets of file j cached on server k.
    int count(int k, int j) const {
        int c = 0;
        for (int i = 0; i < n_; ++i) c += bits_[idx(k, i, j)];
        return c;
    }
    // sum_k m_kj
    int total_count(int j) const {
        int c = 0;
        for (int k = 0; k < k_; ++k) c += count(k, j);
        return c;
    }

    size_t idx(int k, int i, int j) const {
        return (static_cast<size_t>(k) * n_ + i) * f_ + j;
    }
    const std::vector<uint8_t>& raw() const { return bits_; }

private:
    int k_ = 0, n_ = 0, f_ = 0;
    std::vector<uint8_t> bits_;
};

// Packet sizes s[i,j] in Mb; flat layout i*F + j.
class EncodingPlan {
public:
    EncodingPlan() = default;
    EncodingPlan(int packets_per_file, int num_files)
        : n_(packets_per_file), f_(num_files),
          sizes_(static_cast<size_t>(packets_per_file) * num_files, 0.0) {}

    int packets() const { return n_; }
    int files() const { return f_; }

    double size(int i, int j) const { return sizes_[idx(i, j)]; }
    void set(int i, int j, double mb) { sizes_[idx(i, j)] = mb; }

    double file_total(int j) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += sizes_[idx(i, j)];
        return s;
    }
    double rate_mbps(int j, double duration_s) const { return file_total(j) / duration_s; }

    size_t idx(int i, int j) const { return static_cast<size_t>(i) * f_ + j; }
    const std::vector<double>& raw() const { return sizes_; }
    std::vector<double>& raw() { return sizes_; }

    // Equal-size plan at the given per-file rates.
    static EncodingPlan equal_split(const std::vector<double>& rates_mbps,
                                    double duration_s, int packets_per_file);

private:
    int n_ = 0, f_ = 0;
    std::vector<double> sizes_;
};

}  // namespace evc
