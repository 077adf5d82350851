#include "hypererg/arcs.hpp"

#include <algorithm>
#include <cmath>

namespace hypererg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ArcSet ArcSet::normalize(std::vector<std::pair<double, double>> raw) {
    std::vector<std::pair<double, double>> parts;
    for (auto [lo, hi] : raw) {
        if (!(hi > lo)) {
            if (hi == lo) continue;
            throw DomainError("ArcSet interval requires hi >= lo");
        }
        if (hi - lo >= kPi) return ArcSet({{0.0, kPi}});
        const double wlo = wrap_angle(lo);
        const double whi = wlo + (hi - lo);
        if (whi <= kPi) {
            parts.emplace_back(wlo, whi);
        } else {
            parts.emplace_back(wlo, kPi);
            parts.emplace_back(0.0, whi - kPi);
        }
    }
    std::sort(parts.begin(), parts.end());
    std::vector<std::pair<double, double>> merged;
    for (auto& iv : parts) {
        if (!merged.empty() && iv.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, iv.second);
        } else {
            merged.push_back(iv);
        }
    }
    return ArcSet(std::move(merged));
}

ArcSet ArcSet::interval(double lo, double hi) { return normalize({{lo, hi}}); }

ArcSet ArcSet::full() { return ArcSet({{0.0, kPi}}); }

ArcSet ArcSet::from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    return normalize(pairs);
}

bool ArcSet::is_full() const {
    return arcs_.size() == 1 && arcs_[0].first == 0.0 && arcs_[0].second >= kPi;
}

double ArcSet::measure() const {
    double total = 0.0;
    for (auto [lo, hi] : arcs_) total += hi - lo;
    return std::min(total / kPi, 1.0);
}

bool ArcSet::contains(double theta, double tol) const {
    const double t = wrap_angle(theta);
    for (auto [lo, hi] : arcs_) {
        if (t >= lo - tol && t < hi + tol) return true;
        // near-seam wrap: t close to pi may belong to an arc starting at 0
        if (t >= kPi - tol && lo <= tol) return true;
    }
    return false;
}

ArcSet ArcSet::complement() const {
    std::vector<std::pair<double, double>> out;
    double cursor = 0.0;
    for (auto [lo, hi] : arcs_) {
        if (lo > cursor) out.emplace_back(cursor, lo);
        cursor = hi;
    }
    if (cursor < kPi) out.emplace_back(cursor, kPi);
    return ArcSet(std::move(out));
}

ArcSet ArcSet::unite(const ArcSet& other) const {
    std::vector<std::pair<double, double>> raw = arcs_;
    raw.insert(raw.end(), other.arcs_.begin(), other.arcs_.end());
    return normalize(std::move(raw));
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
    std::vector<std::pair<double, double>> out;
    for (auto [alo, ahi] : arcs_) {
        for (auto [blo, bhi] : other.arcs_) {
            const double lo = std::max(alo, blo);
            const double hi = std::min(ahi, bhi);
            if (hi > lo) out.emplace_back(lo, hi);
        }
    }
    return ArcSet(std::move(out));
}

ArcSet ArcSet::translated(double delta) const { return fattened(delta, delta); }

ArcSet ArcSet::fattened(double dlo, double dhi) const {
    if (dhi < dlo) throw DomainError("fattened requires dhi >= dlo");
    std::vector<std::pair<double, double>> raw;
    raw.reserve(arcs_.size());
    for (auto [lo, hi] : arcs_) raw.emplace_back(lo + dlo, hi + dhi);
    return normalize(std::move(raw));
}

double ArcSet::sample(Rng& rng) const {
    if (arcs_.empty()) throw DomainError("cannot sample from an empty ArcSet");
    double total = 0.0;
    for (auto [lo, hi] : arcs_) total += hi - lo;
    double u = rng.uniform() * total;
    for (auto [lo, hi] : arcs_) {
        const double len = hi - lo;
        if (u < len) return lo + u;
        u -= len;
    }
    return arcs_.back().second - 1e-15;  // guards the u == total edge
}

KDensity::KDensity(std::vector<std::pair<ArcSet, double>> pieces) : pieces_(std::move(pieces)) {
    double cum = 0.0;
    for (auto& [set, w] : pieces_) {
        if (w < 0.0) throw DomainError("KDensity weights must be nonnegative");
        cum += w * set.measure();
        piece_mass_.push_back(cum);
    }
    if (std::abs(cum - 1.0) > 1e-12) throw DomainError("KDensity must integrate to 1");
}

KDensity KDensity::uniform_on(const ArcSet& support) {
    const double m = support.measure();
    if (m <= 0.0) throw DomainError("KDensity support must have positive measure");
    return KDensity({{support, 1.0 / m}});
}

KDensity KDensity::from_pieces(std::vector<std::pair<ArcSet, double>> pieces) {
    return KDensity(std::move(pieces));
}

double KDensity::density_at(double theta) const {
    double v = 0.0;
    for (auto& [set, w] : pieces_)
        if (set.contains(theta)) v += w;
    return v;
}

double KDensity::essential_sup() const {
    double m = 0.0;
    for (auto& [set, w] : pieces_) m = std::max(m, w);
    return m;
}

double KDensity::total_mass() const { return piece_mass_.empty() ? 0.0 : piece_mass_.back(); }

double KDensity::sample(Rng& rng) const {
    const double u = rng.uniform() * total_mass();
    std::size_t idx = pieces_.size() - 1;
    for (std::size_t i = 0; i < piece_mass_.size(); ++i) {
        if (u < piece_mass_[i]) {
            idx = i;
            break;
        }
    }
    // the rng draw below is independent of u; fine for piecewise-constant laws
    return pieces_[idx].first.sample(rng);
}

}  // namespace hypererg
