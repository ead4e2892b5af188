#include "evc/relaxed_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "evc/qoe.hpp"

namespace evc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform double in [0,1) from a 64-bit state (xorshift step included).
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(splitmix64(seed)) {}
    double next() {
        state = splitmix64(state);
        return (state >> 11) * 0x1.0p-53;
    }
};

// Projection of `vals` onto { x in [lo,hi]^d : Lsum <= sum x <= Usum } by
// shifting all coordinates uniformly before clipping (the Euclidean
// projection of a box-plus-simplex-interval set).
void box_sum_project(double* vals, int d, double lo, double hi, double lsum,
                     double usum) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        vals[i] = std::clamp(vals[i], lo, hi);
        s += vals[i];
    }
    if (s >= lsum - 1e-13 && s <= usum + 1e-13) return;

    const bool up = s < lsum;
    const double target = up ? lsum : usum;
    double t_lo = 0.0, t_hi = 1.0;
    auto shifted_sum = [&](double t) {
        double acc = 0.0;
        const double sh = up ? t : -t;
        for (int i = 0; i < d; ++i) acc += std::clamp(vals[i] + sh, lo, hi);
        return acc;
    };
    // expand until the shift overshoots the target
    for (int guard = 0; guard < 200; ++guard) {
        const double v = shifted_sum(t_hi);
        if ((up && v >= target) || (!up && v <= target)) break;
        t_hi *= 2.0;
    }
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        const double v = shifted_sum(mid);
        if ((up && v < target) || (!up && v > target))
            t_lo = mid;
        else
            t_hi = mid;
    }
    const double sh = up ? t_hi : -t_hi;
    for (int i = 0; i < d; ++i) vals[i] = std::clamp(vals[i] + sh, lo, hi);
}

struct Workspace {
    const Scenario& sc;
    const RelaxedOptions& opts;
    int K, n, F;
    size_t M, S, N;  // m size, s size, total
    bool fixed_s;
    std::vector<double> fixed_plan_values;
    std::vector<int8_t> pin;       // per m coord: -1 free, else 0/1
    std::vector<double> sec_lo;    // per file: max(0, security rhs)
    std::vector<double> rate_lo, rate_hi;  // per file, Mb
    // scratch
    std::vector<double> dgdu, fprime, load, summ;
    mutable long evals = 0;

    Workspace(const Scenario& scenario, const RelaxedOptions& options)
        : sc(scenario), opts(options) {
        K = sc.num_servers;
        n = sc.packets_per_file;
        F = sc.num_files();
        M = static_cast<size_t>(K) * n * F;
        S = static_cast<size_t>(n) * F;
        N = M + S;
        fixed_s = opts.fixed_plan.has_value();
        if (fixed_s) fixed_plan_values = opts.fixed_plan->raw();
        pin.assign(M, -1);
        sec_lo.resize(F);
        rate_lo.resize(F);
        rate_hi.resize(F);
        for (int j = 0; j < F; ++j) {
            sec_lo[j] = std::max(0.0, security_rhs(n, sc.files[j].requests));
            rate_lo[j] = sc.files[j].r_min * sc.duration_s;
            rate_hi[j] = sc.files[j].r_max * sc.duration_s;
        }
        dgdu.resize(F);
        fprime.resize(F);
        load.resize(K);
        summ.resize(S);
    }

    size_t midx(int k, int i, int j) const {
        return (static_cast<size_t>(k) * n + i) * F + j;
    }
    size_t sidx(int i, int j) const { return M + static_cast<size_t>(i) * F + j; }

    // transient: holds the m block still during s-only polish phases
    mutable bool freeze_m = false;

    void project(std::vector<double>& x, std::vector<double>& buf) const {
        // m block, one file at a time (free coordinates only)
        for (int j = 0; !freeze_m && j < F; ++j) {
            buf.clear();
            double pinned = 0.0;
            for (int k = 0; k < K; ++k)
                for (int i = 0; i < n; ++i) {
                    const size_t id = midx(k, i, j);
                    if (pin[id] >= 0)
                        pinned += pin[id];
                    else
                        buf.push_back(x[id]);
                }
            if (!buf.empty()) {
                const double lo = std::max(0.0, sec_lo[j] - pinned);
                const double hi = std::max(lo, static_cast<double>(n) - pinned);
                box_sum_project(buf.data(), static_cast<int>(buf.size()), 0.0, 1.0,
                                std::min(lo, static_cast<double>(buf.size())), hi);
            }
            size_t b = 0;
            for (int k = 0; k < K; ++k)
                for (int i = 0; i < n; ++i) {
                    const size_t id = midx(k, i, j);
                    x[id] = (pin[id] >= 0) ? static_cast<double>(pin[id]) : buf[b++];
                }
        }
        // s block
        if (fixed_s) {
            std::copy(fixed_plan_values.begin(), fixed_plan_values.end(),
                      x.begin() + M);
            return;
        }
        for (int j = 0; j < F; ++j) {
            buf.clear();
            for (int i = 0; i < n; ++i) buf.push_back(x[sidx(i, j)]);
            box_sum_project(buf.data(), n, 0.0, kInf, rate_lo[j], rate_hi[j]);
            for (int i = 0; i < n; ++i) x[sidx(i, j)] = buf[i];
        }
    }

    // Smoothed objective plus augmented-Lagrangian capacity terms.
    // eps = 0 gives the raw objective. grad may be null.
    double eval(const std::vector<double>& x, const std::vector<double>& lambda,
                double mu, double eps, std::vector<double>* grad) const {
        ++evals;
        auto* ws = const_cast<Workspace*>(this);
        std::fill(ws->load.begin(), ws->load.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < F; ++j) {
                double sm = 0.0;
                for (int k = 0; k < K; ++k) sm += x[midx(k, i, j)];
                ws->summ[static_cast<size_t>(i) * F + j] = sm;
            }
        for (int k = 0; k < K; ++k) {
            double lk = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < F; ++j) lk += x[midx(k, i, j)] * x[sidx(i, j)];
            ws->load[k] = lk;
        }

        double obj = 0.0;
        for (int j = 0; j < F; ++j) {
            const VideoFile& file = sc.files[j];
            double total = 0.0, cached = 0.0;
            for (int i = 0; i < n; ++i) {
                const double s = x[sidx(i, j)];
                total += s;
                cached += s * summ[static_cast<size_t>(i) * F + j];
            }
            const double r = total / sc.duration_s;
            const double f = ((file.c1 * r + file.c2) * r + file.c3) * r + file.c4;
            obj -= f;
            ws->fprime[j] =
                ((3.0 * file.c1 * r + 2.0 * file.c2) * r + file.c3) / sc.duration_s;

            const double u = total - cached;
            const double upos = std::max(0.0, u);
            const double y = file.popularity * upos / sc.backhaul_rate_mbps;
            const double base = y * y + eps * eps;
            obj += file.v * std::cbrt(base);
            double dgdy = 0.0;
            if (base > 0.0)
                dgdy = file.v * (2.0 / 3.0) * y / std::cbrt(base * base);
            ws->dgdu[j] =
                (u > 0.0) ? dgdy * file.popularity / sc.backhaul_rate_mbps : 0.0;
        }

        std::vector<double> dpsi(K, 0.0);
        for (int k = 0; k < K; ++k) {
            const double c = load[k] - sc.capacities_mb[k];
            const double t = lambda[k] + mu * c;
            if (t > 0.0) {
                obj += lambda[k] * c + 0.5 * mu * c * c;
                dpsi[k] = t;
            } else if (mu > 0.0) {
                obj -= lambda[k] * lambda[k] / (2.0 * mu);
            }
        }

        if (grad) {
            std::vector<double>& g = *grad;
            g.assign(N, 0.0);
            if (!freeze_m)
                for (int k = 0; k < K; ++k)
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < F; ++j) {
                            const double s = x[sidx(i, j)];
                            g[midx(k, i, j)] = s * (dpsi[k] - dgdu[j]);
                        }
            if (!fixed_s) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < F; ++j) {
                        double acc = -fprime[j] +
                                     dgdu[j] * (1.0 - summ[static_cast<size_t>(i) * F + j]);
                        for (int k = 0; k < K; ++k)
                            acc += dpsi[k] * x[midx(k, i, j)];
                        g[sidx(i, j)] = acc;
                    }
            }
        }
        return obj;
    }

    double capacity_violation(const std::vector<double>& x) const {
        double worst = 0.0;
        for (int k = 0; k < K; ++k) {
            double lk = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < F; ++j) lk += x[midx(k, i, j)] * x[sidx(i, j)];
            worst = std::max(worst, lk - sc.capacities_mb[k]);
        }
        return worst;
    }
};

// Deterministic starting points. Mode 0: security-minimum greedy fill at
// r_min. Mode 1: same fill, then capacity-greedy extension toward lower g.
// Mode 2: everything cached first-fit with rates waterfilled toward r_max
// within the total capacity. Mode 3: the mode-1 fill with each file's rate
// lifted to the highest per-server-feasible value.
std::vector<double> deterministic_start(const Workspace& w, int mode) {
    std::vector<double> x(w.N, 0.0);
    const Scenario& sc = w.sc;
    std::vector<double> rates(w.F);
    for (int j = 0; j < w.F; ++j) rates[j] = sc.files[j].r_min;
    if (w.fixed_s) {
        std::copy(w.fixed_plan_values.begin(), w.fixed_plan_values.end(),
                  x.begin() + w.M);
        for (int j = 0; j < w.F; ++j) {
            double tot = 0.0;
            for (int i = 0; i < w.n; ++i) tot += x[w.sidx(i, j)];
            rates[j] = tot / sc.duration_s;
        }
    } else {
        for (int j = 0; j < w.F; ++j) {
            const double s = rates[j] * sc.duration_s / w.n;
            for (int i = 0; i < w.n; ++i) x[w.sidx(i, j)] = s;
        }
    }

    if (mode == 2 && !w.fixed_s) {
        // waterfill rates in popularity order, reserving r_min for the rest
        double total_cap = 0.0;
        for (double phi : sc.capacities_mb) total_cap += phi;
        std::vector<double> suffix(w.F + 1, 0.0);
        for (int j = w.F - 1; j >= 0; --j)
            suffix[j] = suffix[j + 1] + sc.files[j].r_min * sc.duration_s;
        double remaining_cap = total_cap;
        for (int j = 0; j < w.F; ++j) {
            const VideoFile& f = sc.files[j];
            rates[j] = std::clamp((remaining_cap - suffix[j + 1]) / sc.duration_s,
                                  f.r_min, f.r_max);
            remaining_cap -= rates[j] * sc.duration_s;
            const double s = rates[j] * sc.duration_s / w.n;
            for (int i = 0; i < w.n; ++i) x[w.sidx(i, j)] = s;
        }
    }

    std::vector<double> remaining = sc.capacities_mb;
    std::vector<int> count(w.F, 0);
    std::vector<int> next_packet(w.F, 0);
    // honor pins first
    for (size_t id = 0; id < w.M; ++id)
        if (w.pin[id] == 1) {
            x[id] = 1.0;
            const int j = static_cast<int>(id % w.F);
            const int k = static_cast<int>(id / (static_cast<size_t>(w.n) * w.F));
            count[j] += 1;
            remaining[k] -= x[w.sidx(static_cast<int>((id / w.F) % w.n), j)];
        }

    auto place_next = [&](int j) -> bool {
        // next未pinned packet of file j, onto the server with most room
        while (next_packet[j] < w.n) {
            const int i = next_packet[j];
            bool already = false;
            for (int k = 0; k < w.K; ++k)
                if (w.pin[w.midx(k, i, j)] == 1) already = true;
            if (already) {
                ++next_packet[j];
                continue;
            }
            int best_k = -1;
            for (int k = 0; k < w.K; ++k) {
                if (w.pin[w.midx(k, i, j)] >= 0) continue;
                if (best_k < 0 || remaining[k] > remaining[best_k]) best_k = k;
            }
            if (best_k < 0) {
                ++next_packet[j];
                continue;
            }
            x[w.midx(best_k, i, j)] = 1.0;
            remaining[best_k] -= x[w.sidx(i, j)];
            count[j] += 1;
            ++next_packet[j];
            return true;
        }
        return false;
    };

    // most-requested files first
    std::vector<int> order(w.F);
    std::iota(order.begin(), order.end(), 0);
    for (int j : order) {
        const int need = mode == 2 ? w.n
                                   : std::min(w.n, static_cast<int>(std::ceil(
                                                       std::max(0.0, w.sec_lo[j]) - 1e-9)));
        while (count[j] < need)
            if (!place_next(j)) break;
    }

    if (mode == 1 || mode == 3) {
        // spend leftover capacity where it cuts g the most per Mb
        auto g_of = [&](int j, int c) {
            const double uncached = (w.n - c) * rates[j] * sc.duration_s / w.n;
            const double y =
                sc.files[j].popularity * std::max(0.0, uncached) / sc.backhaul_rate_mbps;
            return sc.files[j].v * std::pow(y, 2.0 / 3.0);
        };
        for (int guard = 0; guard < w.n * w.F; ++guard) {
            int best_j = -1;
            double best_gain = 0.0;
            for (int j = 0; j < w.F; ++j) {
                if (count[j] >= w.n || next_packet[j] >= w.n) continue;
                const double size = rates[j] * sc.duration_s / w.n;
                if (size <= 0.0) continue;
                const double room = *std::max_element(remaining.begin(), remaining.end());
                if (room < size) continue;
                const double gain = (g_of(j, count[j]) - g_of(j, count[j] + 1)) / size;
                if (gain > best_gain + 1e-15) {
                    best_gain = gain;
                    best_j = j;
                }
            }
            if (best_j < 0) break;
            if (!place_next(best_j)) break;
        }
    }

    if (mode == 3 && !w.fixed_s) {
        // lift each file's rate to the largest value its cached packets fit;
        // loads are tracked at equal per-file sizes
        std::vector<double> load(w.K, 0.0);
        std::vector<int> count_kj(static_cast<size_t>(w.K) * w.F, 0);
        for (int k = 0; k < w.K; ++k)
            for (int jf = 0; jf < w.F; ++jf) {
                int c = 0;
                for (int i = 0; i < w.n; ++i)
                    if (x[w.midx(k, i, jf)] > 0.5) ++c;
                count_kj[static_cast<size_t>(k) * w.F + jf] = c;
                load[k] += c * rates[jf] * sc.duration_s / w.n;
            }
        for (int j = 0; j < w.F; ++j) {
            const VideoFile& f = sc.files[j];
            double r_best = f.r_max;
            for (int k = 0; k < w.K; ++k) {
                const int c = count_kj[static_cast<size_t>(k) * w.F + j];
                if (c == 0) continue;
                const double rest =
                    load[k] - c * rates[j] * sc.duration_s / w.n;
                r_best = std::min(
                    r_best, (sc.capacities_mb[k] - rest) / c * w.n / sc.duration_s);
            }
            const double r_new = std::clamp(r_best, f.r_min, f.r_max);
            for (int k = 0; k < w.K; ++k) {
                const int c = count_kj[static_cast<size_t>(k) * w.F + j];
                load[k] += c * (r_new - rates[j]) * sc.duration_s / w.n;
            }
            rates[j] = r_new;
            const double s = r_new * sc.duration_s / w.n;
            for (int i = 0; i < w.n; ++i) x[w.sidx(i, j)] = s;
        }
    }
    return x;
}

std::vector<double> random_start(const Workspace& w, Rng& rng) {
    std::vector<double> x(w.N);
    for (size_t id = 0; id < w.M; ++id)
        x[id] = (w.pin[id] >= 0) ? static_cast<double>(w.pin[id]) : rng.next();
    if (w.fixed_s) {
        std::copy(w.fixed_plan_values.begin(), w.fixed_plan_values.end(),
                  x.begin() + w.M);
    } else {
        for (int j = 0; j < w.F; ++j) {
            const VideoFile& f = w.sc.files[j];
            const double r = f.r_min + rng.next() * (f.r_max - f.r_min);
            const double s = r * w.sc.duration_s / w.n;
            for (int i = 0; i < w.n; ++i) x[w.sidx(i, j)] = s;
        }
    }
    return x;
}

struct StartResult {
    bool feasible = false;
    double objective = kInf;
    std::vector<double> x;
    std::vector<double> lambda;
    double mu = 0.0;
    long iterations = 0;
};

// Projected-gradient descent with BB steps and Armijo backtracking on the
// augmented Lagrangian for fixed multipliers. Returns iterations used.
long inner_solve(const Workspace& w, std::vector<double>& x,
                 const std::vector<double>& lambda, double mu, long budget,
                 double tol) {
    std::vector<double> buf, grad, trial, grad_new;
    buf.reserve(std::max<size_t>(w.K * static_cast<size_t>(w.n), w.n));
    w.project(x, buf);
    double fx = w.eval(x, lambda, mu, w.opts.smoothing_eps, &grad);
    double alpha = 1.0;
    long it = 0;
    for (; it < budget; ++it) {
        // proximal residual at unit step
        trial = x;
        for (size_t id = 0; id < w.N; ++id) trial[id] -= grad[id];
        w.project(trial, buf);
        double res = 0.0;
        for (size_t id = 0; id < w.N; ++id) {
            const double d = trial[id] - x[id];
            res += d * d;
        }
        res = std::sqrt(res);
        if (res < tol) break;

        double a = std::clamp(alpha, 1e-12, 1e12);
        double fn = kInf;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            trial = x;
            for (size_t id = 0; id < w.N; ++id) trial[id] -= a * grad[id];
            w.project(trial, buf);
            double descent = 0.0;
            for (size_t id = 0; id < w.N; ++id)
                descent += grad[id] * (trial[id] - x[id]);
            fn = w.eval(trial, lambda, mu, w.opts.smoothing_eps, nullptr);
            if (fn <= fx + 1e-4 * descent || descent >= -1e-16) {
                accepted = descent < -1e-16 || fn < fx;
                break;
            }
            a *= 0.5;
        }
        if (!accepted) break;  // no descent direction left

        const double f_old = fx;
        const double f_new = w.eval(trial, lambda, mu, w.opts.smoothing_eps, &grad_new);
        double num = 0.0, den = 0.0;
        for (size_t id = 0; id < w.N; ++id) {
            const double dx = trial[id] - x[id];
            const double dg = grad_new[id] - grad[id];
            num += dx * dx;
            den += dx * dg;
        }
        alpha = (den > 1e-18) ? num / den : a * 2.0;
        x.swap(trial);
        grad.swap(grad_new);
        fx = f_new;
        (void)fn;
        if (std::abs(f_old - f_new) < 1e-14 * (1.0 + std::abs(f_old)) && res < tol * 100)
            break;
    }
    return it;
}

// Pure feasibility polish: gradient descent on 0.5 * sum max(0, load-Phi)^2.
bool restore_feasibility(const Workspace& w, std::vector<double>& x, long budget,
                         double tol) {
    std::vector<double> buf, grad(w.N), trial;
    for (long it = 0; it < budget; ++it) {
        const double viol = w.capacity_violation(x);
        if (viol <= tol) return true;
        // gradient of the squared violation
        std::fill(grad.begin(), grad.end(), 0.0);
        for (int k = 0; k < w.K; ++k) {
            double lk = 0.0;
            for (int i = 0; i < w.n; ++i)
                for (int jf = 0; jf < w.F; ++jf)
                    lk += x[w.midx(k, i, jf)] * x[w.sidx(i, jf)];
            const double c = lk - w.sc.capacities_mb[k];
            if (c <= 0.0) continue;
            for (int i = 0; i < w.n; ++i)
                for (int jf = 0; jf < w.F; ++jf) {
                    grad[w.midx(k, i, jf)] += c * x[w.sidx(i, jf)];
                    if (!w.fixed_s) grad[w.sidx(i, jf)] += c * x[w.midx(k, i, jf)];
                }
        }
        double gnorm2 = 0.0;
        for (double g : grad) gnorm2 += g * g;
        if (gnorm2 < 1e-30) return false;  // stuck
        double a = 1.0 / std::sqrt(gnorm2);
        bool improved = false;
        for (int ls = 0; ls < 60; ++ls) {
            trial = x;
            for (size_t id = 0; id < w.N; ++id) trial[id] -= a * grad[id];
            w.project(trial, buf);
            if (w.capacity_violation(trial) < viol * (1.0 - 1e-6)) {
                x.swap(trial);
                improved = true;
                break;
            }
            a *= 0.5;
        }
        if (!improved) return w.capacity_violation(x) <= tol;
    }
    return w.capacity_violation(x) <= tol;
}

// One Frank-Wolfe style push of the m block toward a vertex of the per-file
// polytopes. The latency term is concave in m for fixed sizes, so the linear
// minimizer lands on 0/1 values (at most one fractional entry per file where
// the secure bound is non-integer); a step-size backtrack guards the convex
// capacity penalty. Returns true when the merit value improved.
bool fw_vertex_push(const Workspace& w, std::vector<double>& x,
                    const std::vector<double>& lambda, double mu, double& fx) {
    std::vector<double> grad;
    w.eval(x, lambda, mu, w.opts.smoothing_eps, &grad);

    std::vector<double> y = x;
    std::vector<std::pair<double, size_t>> order;
    for (int j = 0; j < w.F; ++j) {
        order.clear();
        double pinned = 0.0;
        for (int k = 0; k < w.K; ++k)
            for (int i = 0; i < w.n; ++i) {
                const size_t id = w.midx(k, i, j);
                if (w.pin[id] >= 0)
                    pinned += w.pin[id];
                else
                    order.push_back({grad[id], id});
            }
        if (order.empty()) continue;
        std::stable_sort(order.begin(), order.end());
        const double lo = std::max(0.0, w.sec_lo[j] - pinned);
        const double hi = std::max(lo, static_cast<double>(w.n) - pinned);
        double mass = 0.0;
        for (auto& [g, id] : order) {
            double val = 0.0;
            if (g < 0.0 && mass + 1.0 <= hi)
                val = 1.0;
            else if (g < 0.0 && mass < hi)
                val = hi - mass;
            else if (mass < lo)
                val = std::min(1.0, lo - mass);
            y[id] = val;
            mass += val;
        }
    }

    for (double gamma : {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125}) {
        std::vector<double> trial(w.N);
        for (size_t id = 0; id < w.N; ++id)
            trial[id] = x[id] + gamma * (y[id] - x[id]);
        const double ft = w.eval(trial, lambda, mu, w.opts.smoothing_eps, nullptr);
        if (ft < fx - 1e-12) {
            x.swap(trial);
            fx = ft;
            return true;
        }
    }
    return false;
}

// Within a file, entries of equal packet size are interchangeable: the
// objective and every constraint depend on their sum only. Pack each such
// group's mass into its leading entries so the returned point has at most
// one fractional entry per (server, file, size) group. Objective-neutral.
void canonicalize_plateaus(const Workspace& w, std::vector<double>& x) {
    std::vector<std::pair<double, int>> group;  // (size, packet index)
    for (int j = 0; j < w.F; ++j)
        for (int k = 0; k < w.K; ++k) {
            group.clear();
            for (int i = 0; i < w.n; ++i)
                if (w.pin[w.midx(k, i, j)] < 0)
                    group.push_back({x[w.sidx(i, j)], i});
            std::stable_sort(group.begin(), group.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            size_t lo = 0;
            while (lo < group.size()) {
                size_t hi = lo;
                double mass = 0.0;
                while (hi < group.size() && group[hi].first == group[lo].first) {
                    mass += x[w.midx(k, group[hi].second, j)];
                    ++hi;
                }
                for (size_t g = lo; g < hi; ++g) {
                    const double val = std::clamp(mass, 0.0, 1.0);
                    x[w.midx(k, group[g].second, j)] = val;
                    mass -= val;
                }
                lo = hi;
            }
        }
}

StartResult run_start(const Workspace& w, std::vector<double> x,
                      const std::vector<double>* lambda0 = nullptr,
                      double mu0 = 0.0) {
    StartResult out;
    std::vector<double> lambda = lambda0 ? *lambda0 : std::vector<double>(w.K, 0.0);
    double mu = mu0 > 0.0 ? mu0 : 1e-3;
    double prev_viol = kInf;
    long used = 0;
    const long budget = w.opts.max_inner_iters;
    std::vector<double> buf;
    w.project(x, buf);
    for (int outer = 0; outer < 60 && used < budget; ++outer) {
        const long chunk = std::min<long>(budget - used, 2000);
        const long spent = inner_solve(w, x, lambda, mu, chunk, w.opts.tol_grad);
        used += spent;
        const double viol = w.capacity_violation(x);
        if (viol <= w.opts.tol_constraint && spent < chunk) {
            // inner converged on the gradient criterion at a feasible point
            break;
        }
        if (viol <= w.opts.tol_constraint) continue;
        for (int k = 0; k < w.K; ++k) {
            double lk = 0.0;
            for (int i = 0; i < w.n; ++i)
                for (int jf = 0; jf < w.F; ++jf)
                    lk += x[w.midx(k, i, jf)] * x[w.sidx(i, jf)];
            lambda[k] = std::max(0.0, lambda[k] + mu * (lk - w.sc.capacities_mb[k]));
        }
        if (viol > 0.25 * prev_viol) mu = std::min(mu * 10.0, 1e9);
        prev_viol = std::min(prev_viol, viol);
    }
    // vertex refinement: alternate concave pushes of m with short descent
    // rounds until the merit value settles
    double fx = w.eval(x, lambda, mu, w.opts.smoothing_eps, nullptr);
    for (int round = 0; round < 30; ++round) {
        const bool moved = fw_vertex_push(w, x, lambda, mu, fx);
        used += inner_solve(w, x, lambda, mu, 300, w.opts.tol_grad);
        fx = w.eval(x, lambda, mu, w.opts.smoothing_eps, nullptr);
        double viol = w.capacity_violation(x);
        if (viol > w.opts.tol_constraint) {
            for (int k = 0; k < w.K; ++k) {
                double lk = 0.0;
                for (int i = 0; i < w.n; ++i)
                    for (int jf = 0; jf < w.F; ++jf)
                        lk += x[w.midx(k, i, jf)] * x[w.sidx(i, jf)];
                lambda[k] =
                    std::max(0.0, lambda[k] + mu * (lk - w.sc.capacities_mb[k]));
            }
            mu = std::min(mu * 4.0, 1e9);
            fx = w.eval(x, lambda, mu, w.opts.smoothing_eps, nullptr);
        } else if (!moved) {
            break;
        }
    }

    // settle on a vertex: pure pushes, then an s-only polish with m held
    for (int round = 0; round < 20; ++round)
        if (!fw_vertex_push(w, x, lambda, mu, fx)) break;
    if (!w.fixed_s) {
        w.freeze_m = true;
        used += inner_solve(w, x, lambda, mu, 1500, w.opts.tol_grad);
        w.freeze_m = false;
    }

    out.iterations = used;
    if (w.capacity_violation(x) > w.opts.tol_constraint) {
        if (!restore_feasibility(w, x, 4000, w.opts.tol_constraint)) {
            out.feasible = false;
            out.x = std::move(x);
            return out;
        }
    }
    out.feasible = true;
    canonicalize_plateaus(w, x);
    std::vector<double> no_lambda(w.K, 0.0);
    out.objective = w.eval(x, no_lambda, 0.0, 0.0, nullptr);
    out.x = std::move(x);
    out.lambda = std::move(lambda);
    out.mu = mu;
    return out;
}

}  // namespace

double RelaxedResiduals::max_violation() const {
    double worst = box;
    for (double v : capacity) worst = std::max(worst, v);
    for (double v : count_upper) worst = std::max(worst, v);
    for (double v : security) worst = std::max(worst, v);
    for (double v : rate) worst = std::max(worst, v);
    return worst;
}

RelaxedResiduals relaxed_residuals(const Scenario& sc, const std::vector<double>& m,
                                   const EncodingPlan& plan) {
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    RelaxedResiduals res;
    res.capacity.assign(K, 0.0);
    res.count_upper.assign(F, 0.0);
    res.security.assign(F, 0.0);
    res.rate.assign(F, 0.0);
    auto midx = [&](int k, int i, int j) {
        return (static_cast<size_t>(k) * n + i) * F + j;
    };
    for (int k = 0; k < K; ++k) {
        double lk = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < F; ++j) lk += m[midx(k, i, j)] * plan.size(i, j);
        res.capacity[k] = std::max(0.0, lk - sc.capacities_mb[k]);
    }
    for (int j = 0; j < F; ++j) {
        double cnt = 0.0;
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < n; ++i) cnt += m[midx(k, i, j)];
        res.count_upper[j] = std::max(0.0, cnt - n);
        res.security[j] = std::max(0.0, security_rhs(n, sc.files[j].requests) - cnt);
        const double total = plan.file_total(j);
        const double lo = sc.files[j].r_min * sc.duration_s;
        const double hi = sc.files[j].r_max * sc.duration_s;
        res.rate[j] = std::max({0.0, lo - total, total - hi});
    }
    for (double v : m) res.box = std::max({res.box, -v, v - 1.0});
    return res;
}

double relaxed_objective(const Scenario& sc, const std::vector<double>& m,
                         const EncodingPlan& plan) {
    const int K = sc.num_servers, n = sc.packets_per_file, F = sc.num_files();
    auto midx = [&](int k, int i, int j) {
        return (static_cast<size_t>(k) * n + i) * F + j;
    };
    double obj = 0.0;
    for (int j = 0; j < F; ++j) {
        const VideoFile& file = sc.files[j];
        double total = 0.0, cached = 0.0;
        for (int i = 0; i < n; ++i) {
            const double s = plan.size(i, j);
            total += s;
            for (int k = 0; k < K; ++k) cached += m[midx(k, i, j)] * s;
        }
        obj -= encoding_quality(file, total, sc.duration_s);
        const double u = std::max(0.0, total - cached);
        const double y = file.popularity * u / sc.backhaul_rate_mbps;
        obj += file.v * std::pow(y, 2.0 / 3.0);
    }
    return obj;
}

RelaxedSolution solve_relaxed(const Scenario& sc, const PinSet& pins,
                              const RelaxedOptions& options) {
    sc.validate();
    if (options.n_starts < 1)
        throw std::invalid_argument("solve_relaxed: n_starts must be >= 1");
    if (options.fixed_plan &&
        (options.fixed_plan->packets() != sc.packets_per_file ||
         options.fixed_plan->files() != sc.num_files()))
        throw std::invalid_argument("solve_relaxed: fixed plan dimensions mismatch");

    Workspace w(sc, options);

    std::set<std::tuple<int, int, int>> seen;
    for (const Pin& p : pins) {
        if (p.k < 0 || p.k >= w.K || p.i < 0 || p.i >= w.n || p.j < 0 || p.j >= w.F)
            throw std::invalid_argument("solve_relaxed: pin coordinates out of range");
        if (p.value != 0 && p.value != 1)
            throw std::invalid_argument("solve_relaxed: pin values must be 0 or 1");
        if (!seen.insert({p.k, p.i, p.j}).second)
            throw std::invalid_argument("solve_relaxed: duplicate pin");
        w.pin[w.midx(p.k, p.i, p.j)] = static_cast<int8_t>(p.value);
    }

    RelaxedSolution sol;
    sol.servers = w.K;
    sol.packets = w.n;
    sol.num_files = w.F;
    sol.plan = EncodingPlan(w.n, w.F);

    // cheap arithmetic screens: the pins alone can contradict the count or
    // security constraints
    for (int j = 0; j < w.F; ++j) {
        int ones = 0, free_cnt = 0;
        for (int k = 0; k < w.K; ++k)
            for (int i = 0; i < w.n; ++i) {
                const int8_t pv = w.pin[w.midx(k, i, j)];
                if (pv == 1) ++ones;
                if (pv < 0) ++free_cnt;
            }
        if (ones > w.n || ones + free_cnt < w.sec_lo[j] - 1e-12) {
            sol.status = SolveStatus::infeasible;
            return sol;
        }
    }

    StartResult best;
    bool any_budget_out = false;
    int best_idx = -1;
    long total_iters = 0;
    for (int s = 0; s < options.n_starts; ++s) {
        std::vector<double> x0;
        int det = s;
        if (options.warm_start) {
            if (s == 0)
                x0 = *options.warm_start;
            else
                det = s - 1;
        }
        if (x0.empty()) {
            if (det <= 3) {
                x0 = deterministic_start(w, det);
            } else {
                Rng rng(options.seed * 0x9E3779B97F4A7C15ULL + det);
                x0 = random_start(w, rng);
            }
        }
        if (x0.size() != w.N)
            throw std::invalid_argument("solve_relaxed: warm start has wrong size");
        const bool warm = options.warm_start && s == 0;
        const std::vector<double>* lambda0 =
            warm && options.warm_multipliers ? &*options.warm_multipliers : nullptr;
        StartResult r = run_start(w, std::move(x0), lambda0,
                                  warm ? options.warm_mu : 0.0);
        total_iters += r.iterations;
        if (r.iterations >= options.max_inner_iters && !r.feasible)
            any_budget_out = true;
        if (r.feasible && r.objective < best.objective - 1e-12) {
            best = std::move(r);
            best_idx = s;
        } else if (r.feasible && !best.feasible) {
            best = std::move(r);
            best_idx = s;
        }
    }

    sol.iterations = total_iters;
    sol.evaluations = w.evals;
    if (!best.feasible) {
        sol.status = any_budget_out ? SolveStatus::max_iters : SolveStatus::infeasible;
        return sol;
    }
    sol.status = SolveStatus::feasible;
    sol.best_start = best_idx;
    sol.objective = best.objective;
    sol.multipliers = best.lambda;
    sol.penalty_mu = best.mu;
    sol.m.assign(best.x.begin(), best.x.begin() + w.M);
    // pinned coordinates are exact by construction
    for (size_t id = 0; id < w.M; ++id)
        if (w.pin[id] >= 0) sol.m[id] = static_cast<double>(w.pin[id]);
    for (int i = 0; i < w.n; ++i)
        for (int j = 0; j < w.F; ++j) sol.plan.set(i, j, best.x[w.sidx(i, j)]);
    return sol;
}

std::vector<std::array<int, 3>> fractional_entries(const RelaxedSolution& sol,
                                                   double tol) {
    std::vector<std::array<int, 3>> out;
    for (int j = 0; j < sol.num_files; ++j)
        for (int i = 0; i < sol.packets; ++i)
            for (int k = 0; k < sol.servers; ++k) {
                const double v = sol.m_at(k, i, j);
                if (std::min(std::abs(v), std::abs(1.0 - v)) > tol)
                    out.push_back({k, i, j});
            }
    return out;
}

}  // namespace evc
