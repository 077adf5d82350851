// Monte Carlo evaluation of averaging operators, convergence sweeps,
// empirical maximal functions, and weighted one-dimensional flow averages.
//
// Parallel runs split the sample budget into one contiguous block per
// worker; worker w uses the RNG substream (seed, w) and partial sums are
// merged in worker order, so results depend only on (seed, worker count).
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "hypererg/dynamics.hpp"
#include "hypererg/group.hpp"
#include "hypererg/measures.hpp"
#include "hypererg/quadrature.hpp"
#include "hypererg/rng.hpp"

namespace hypererg {

struct AverageEstimate {
    double r = 0.0;
    std::size_t n_samples = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    double wall_time = 0.0;
};

struct ConvergenceRow {
    double r;
    AverageEstimate estimate;
    double target;
    double deviation;
    bool flagged;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double target = 0.0;
    double bias_budget = 0.0;
    bool all_pass = true;
};

struct MaximalEstimate {
    std::vector<double> per_start_max;
    double p = 2.0;
    double f_norm = 0.0;
    double ratio = 0.0;
};

namespace detail {

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
};

// Sub-seed for the task with the given ordinal (r-major, then start index),
// so that multi-estimate drivers stay deterministic under one master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t ordinal) {
    SplitMix64 sm(seed + (ordinal + 1) * 0x9e3779b97f4a7c15ULL);
    return sm.next();
}

// Runs fn(worker_index, rng, count) over a deterministic partition of n.
template <class Fn>
void run_partitioned(std::size_t n, std::uint64_t seed, int workers, Fn&& fn,
                     std::vector<Accumulator>& out) {
    if (workers < 1) workers = 1;
    out.assign(static_cast<std::size_t>(workers), Accumulator{});
    const std::size_t base = n / static_cast<std::size_t>(workers);
    const std::size_t extra = n % static_cast<std::size_t>(workers);
    auto task = [&](int w) {
        const std::size_t count = base + (static_cast<std::size_t>(w) < extra ? 1 : 0);
        Rng rng(seed, static_cast<std::uint64_t>(w));
        fn(w, rng, count, out[static_cast<std::size_t>(w)]);
    };
    if (workers == 1) {
        task(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(task, w);
    for (auto& th : pool) th.join();
}

AverageEstimate merge(const std::vector<Accumulator>& parts, double r, std::uint64_t seed,
                      double wall_time);

}  // namespace detail

// Monte Carlo estimate of nu_r(f)(x0) = (1/n) sum f(g_i^{-1} x0).
template <class Action, class X>
AverageEstimate estimate_average(const MeasureFamily& family, const Action& action,
                                 const Observable<X>& f, const X& x0, double r, std::size_t n,
                                 std::uint64_t seed, int workers = 1) {
    if (n < 1) throw DomainError("estimate_average requires n >= 1");
    const PreparedFamily prepared(family, r);
    const auto start = std::chrono::steady_clock::now();
    std::vector<detail::Accumulator> parts;
    detail::run_partitioned(
        n, seed, workers,
        [&](int, Rng& rng, std::size_t count, detail::Accumulator& acc) {
            for (std::size_t i = 0; i < count; ++i) {
                const GroupElement g = prepared.sample(rng);
                const double v = f.eval(action.apply(x0, g));
                acc.sum += v;
                acc.sum_sq += v * v;
                ++acc.n;
            }
        },
        parts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();
    return detail::merge(parts, r, seed, wall);
}

// Sweep in r against the observable's exact mean; a radius is flagged when
// |mean - target| > 3 std_error + bias_budget.  The sample budget n_per_r is
// split evenly across the start points.
template <class Action, class X>
ConvergenceReport convergence_sweep(const MeasureFamily& family, const Action& action,
                                    const Observable<X>& f, const std::vector<X>& starts,
                                    const std::vector<double>& r_grid, std::size_t n_per_r,
                                    std::uint64_t seed, int workers = 1,
                                    double bias_budget = 0.01) {
    if (starts.empty()) throw DomainError("convergence_sweep requires at least one start point");
    if (r_grid.empty()) throw DomainError("convergence_sweep requires a nonempty grid");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] > r_grid[i - 1]))
            throw DomainError("convergence_sweep grid must be strictly increasing");
    ConvergenceReport report;
    report.target = f.exact_mean;
    report.bias_budget = bias_budget;
    const std::size_t per_start = std::max<std::size_t>(1, n_per_r / starts.size());
    std::uint64_t stream = 0;
    for (double r : r_grid) {
        std::vector<detail::Accumulator> parts;
        const auto start_time = std::chrono::steady_clock::now();
        const PreparedFamily prepared(family, r);
        for (const X& x0 : starts) {
            std::vector<detail::Accumulator> sub;
            detail::run_partitioned(
                per_start, detail::derive_seed(seed, stream++), workers,
                [&](int, Rng& rng, std::size_t count, detail::Accumulator& acc) {
                    for (std::size_t i = 0; i < count; ++i) {
                        const GroupElement g = prepared.sample(rng);
                        const double v = f.eval(action.apply(x0, g));
                        acc.sum += v;
                        acc.sum_sq += v * v;
                        ++acc.n;
                    }
                },
                sub);
            parts.insert(parts.end(), sub.begin(), sub.end());
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
        AverageEstimate est = detail::merge(parts, r, seed, wall);
        ConvergenceRow row;
        row.r = r;
        row.estimate = est;
        row.target = f.exact_mean;
        row.deviation = std::abs(est.mean - f.exact_mean);
        row.flagged = row.deviation > 3.0 * est.std_error + bias_budget;
        if (row.flagged) report.all_pass = false;
        report.rows.push_back(row);
    }
    return report;
}

// Empirical maximal-function witness: per start, the sup over the grid of
// |nu_r f|; reported as ||max||_p over starts divided by the empirical
// ||f||_p over the same starts.
template <class Action, class X>
MaximalEstimate maximal_ratio(const MeasureFamily& family, const Action& action,
                              const Observable<X>& f, const std::vector<X>& starts,
                              const std::vector<double>& r_grid, double p, std::size_t n_per_est,
                              std::uint64_t seed, int workers = 1) {
    if (!(p > 1.0)) throw DomainError("maximal_ratio requires p > 1");
    if (starts.empty() || r_grid.empty())
        throw DomainError("maximal_ratio requires starts and a grid");
    MaximalEstimate out;
    out.p = p;
    out.per_start_max.reserve(starts.size());
    std::vector<PreparedFamily> prepared;
    prepared.reserve(r_grid.size());
    for (double r : r_grid) prepared.emplace_back(family, r);
    double f_norm_acc = 0.0;
    std::uint64_t stream = 0;
    for (const X& x0 : starts) {
        double best = 0.0;
        for (const PreparedFamily& fam : prepared) {
            std::vector<detail::Accumulator> parts;
            detail::run_partitioned(
                n_per_est, detail::derive_seed(seed, stream++), workers,
                [&](int, Rng& rng, std::size_t count, detail::Accumulator& acc) {
                    for (std::size_t i = 0; i < count; ++i) {
                        const GroupElement g = fam.sample(rng);
                        const double v = std::abs(f.eval(action.apply(x0, g)));
                        acc.sum += v;
                        ++acc.n;
                    }
                },
                parts);
            double total = 0.0;
            std::size_t cnt = 0;
            for (const auto& a : parts) {
                total += a.sum;
                cnt += a.n;
            }
            best = std::max(best, total / static_cast<double>(cnt));
        }
        out.per_start_max.push_back(best);
        f_norm_acc += std::pow(std::abs(f.eval(x0)), p);
    }
    double max_norm_acc = 0.0;
    for (double m : out.per_start_max) max_norm_acc += std::pow(m, p);
    const double n_starts = static_cast<double>(starts.size());
    out.f_norm = std::pow(f_norm_acc / n_starts, 1.0 / p);
    const double max_norm = std::pow(max_norm_acc / n_starts, 1.0 / p);
    out.ratio = out.f_norm > 0.0 ? max_norm / out.f_norm : 0.0;
    return out;
}

// Weight for one-dimensional averages: psi with known growth exponent.
struct BirkhoffWeight {
    std::function<double(double)> psi;
    double kappa;

    static BirkhoffWeight monomial(double kappa);
    static BirkhoffWeight from_profile(const RankOneProfile& profile);
};

enum class BirkhoffMode { Ball, Window };

// (1 / eta[window]) int f(h_t^{-1} x0) psi(t) dt by composite
// Gauss-Legendre; window is [0, T] in Ball mode.  In Window mode T is the
// shell radius r and the window is [2 sinh(b r), 2 sinh(b (r + eps))].
template <class Flow, class X>
double weighted_birkhoff(const Flow& flow, const Observable<X>& f, const X& x0, double T,
                         const BirkhoffWeight& weight, BirkhoffMode mode = BirkhoffMode::Ball,
                         double eps = 1.0, double b = 0.5, double max_panel = 0.1) {
    if (!(weight.kappa > 0.0)) throw DomainError("weighted_birkhoff requires kappa > 0");
    double lo = 0.0;
    double hi = T;
    if (mode == BirkhoffMode::Window) {
        if (!(eps > 0.0) || !(b > 0.0))
            throw DomainError("window mode requires eps > 0 and b > 0");
        lo = 2.0 * std::sinh(b * T);
        hi = 2.0 * std::sinh(b * (T + eps));
    }
    if (!(hi > lo)) throw DomainError("weighted_birkhoff requires a nonempty window");
    const auto integrand = [&](double t) { return f.eval(flow.apply(x0, -t)) * weight.psi(t); };
    const double mass = integrate_panels(weight.psi, lo, hi, max_panel);
    if (!(mass > 0.0)) throw DomainError("weight has zero mass on the window");
    return integrate_panels(integrand, lo, hi, max_panel) / mass;
}

// Monte Carlo evaluation of the same weighted average: t sampled from the
// normalized weight on the window.  Cross-checks the quadrature path.
template <class Flow, class X>
AverageEstimate weighted_birkhoff_mc(const Flow& flow, const Observable<X>& f, const X& x0,
                                     double T, const BirkhoffWeight& weight,
                                     BirkhoffMode mode = BirkhoffMode::Ball, double eps = 1.0,
                                     double b = 0.5, std::size_t n = 100000,
                                     std::uint64_t seed = 1, int workers = 1) {
    double lo = 0.0;
    double hi = T;
    if (mode == BirkhoffMode::Window) {
        lo = 2.0 * std::sinh(b * T);
        hi = 2.0 * std::sinh(b * (T + eps));
    }
    if (!(hi > lo)) throw DomainError("weighted_birkhoff_mc requires a nonempty window");
    const RadialCdfTable table(weight.psi, lo, hi);
    const auto start = std::chrono::steady_clock::now();
    std::vector<detail::Accumulator> parts;
    detail::run_partitioned(
        n, seed, workers,
        [&](int, Rng& rng, std::size_t count, detail::Accumulator& acc) {
            for (std::size_t i = 0; i < count; ++i) {
                const double t = table.invert(rng.uniform());
                const double v = f.eval(flow.apply(x0, -t));
                acc.sum += v;
                acc.sum_sq += v * v;
                ++acc.n;
            }
        },
        parts);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return detail::merge(parts, T, seed, wall);
}

struct TorusFlowAction {
    double slope = 1.4142135623730951;

    TorusPoint apply(const TorusPoint& x, double t) const { return torus_flow(x, t, slope); }
};

struct ModularHorocycleFlow {
    ModularPoint apply(const ModularPoint& x, double t) const {
        return horocycle_flow_modular(x, t);
    }
};

// Plain time average (1/T) int_0^T f(h_t x) dt by stepped evaluation with
// incremental re-reduction; suited to long horocycle orbits.
double horocycle_time_average(const ModularPoint& x0, double T,
                              const Observable<ModularPoint>& f, double step = 0.01);

// Log- or linearly-spaced grids.
std::vector<double> linear_grid(double lo, double hi, int count);
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace hypererg
