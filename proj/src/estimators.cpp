#include "hypererg/estimators.hpp"

#include <cmath>

namespace hypererg {

namespace detail {

AverageEstimate merge(const std::vector<Accumulator>& parts, double r, std::uint64_t seed,
                      double wall_time) {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (const Accumulator& a : parts) {
        sum += a.sum;
        sum_sq += a.sum_sq;
        n += a.n;
    }
    AverageEstimate est;
    est.r = r;
    est.n_samples = n;
    est.seed = seed;
    est.wall_time = wall_time;
    est.mean = sum / static_cast<double>(n);
    if (n > 1) {
        const double var =
            std::max(0.0, (sum_sq - static_cast<double>(n) * est.mean * est.mean) /
                              static_cast<double>(n - 1));
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return est;
}

}  // namespace detail

BirkhoffWeight BirkhoffWeight::monomial(double kappa) {
    if (!(kappa > 0.0)) throw DomainError("monomial weight requires kappa > 0");
    return BirkhoffWeight{[kappa](double t) { return std::pow(t, kappa); }, kappa};
}

BirkhoffWeight BirkhoffWeight::from_profile(const RankOneProfile& profile) {
    return BirkhoffWeight{[profile](double t) { return psi_density(profile, t); },
                          profile.kappa()};
}

double horocycle_time_average(const ModularPoint& x0, double T,
                              const Observable<ModularPoint>& f, double step) {
    if (!(T > 0.0)) throw DomainError("time average requires T > 0");
    if (!(step > 0.0)) throw DomainError("time average requires step > 0");
    const long n = std::max(1L, static_cast<long>(std::llround(T / step)));
    const double h = T / static_cast<double>(n);
    ModularPoint x = horocycle_flow_modular(x0, 0.5 * h);  // midpoint rule
    double acc = f.eval(x);
    for (long i = 1; i < n; ++i) {
        x = horocycle_flow_modular(x, h);
        acc += f.eval(x);
    }
    return acc / static_cast<double>(n);
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1) throw DomainError("grid requires count >= 1");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (int i = 0; i < count; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return grid;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("log grid requires 0 < lo < hi");
    if (count < 1) throw DomainError("grid requires count >= 1");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        grid.push_back(lo);
        return grid;
    }
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        grid.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) / (count - 1)));
    return grid;
}

}  // namespace hypererg
