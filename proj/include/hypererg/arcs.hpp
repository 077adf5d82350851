// Subsets and densities on the rotation group K = SO(2)/{+-I}, identified
// with angles modulo pi.  m_K is the normalized Haar measure, so the full
// circle has measure 1.
#pragma once

#include <utility>
#include <vector>

#include "hypererg/group.hpp"
#include "hypererg/rng.hpp"

namespace hypererg {

// A finite union of half-open angle intervals [lo, hi) modulo pi, stored
// normalized: sorted, pairwise disjoint, contained in [0, pi].
class ArcSet {
  public:
    ArcSet() = default;

    // Single arc [lo, hi) of positive length; wraps modulo pi, so
    // interval(2.8, 3.5) covers [2.8, pi) and [0, 3.5 - pi).
    static ArcSet interval(double lo, double hi);
    static ArcSet full();
    // Arcs given as consecutive (lo, hi) pairs.
    static ArcSet from_pairs(const std::vector<std::pair<double, double>>& pairs);

    bool empty() const { return arcs_.empty(); }
    bool is_full() const;

    // Haar measure in m_K units: total angle length / pi, in [0, 1].
    double measure() const;

    const std::vector<std::pair<double, double>>& intervals() const { return arcs_; }

    bool contains(double theta, double tol = 0.0) const;

    ArcSet complement() const;
    ArcSet unite(const ArcSet& other) const;
    ArcSet intersect(const ArcSet& other) const;

    // Rotate every arc by delta (modulo pi).
    ArcSet translated(double delta) const;

    // Minkowski sum with the shift interval [dlo, dhi]: each arc [lo, hi)
    // becomes [lo + dlo, hi + dhi).  Realizes unions of the form
    // U_r = union over s of U w_s^{-1} once the sweep range of the angle
    // path is known.
    ArcSet fattened(double dlo, double dhi) const;

    // Uniform sample (with respect to m_K) from the set.
    double sample(Rng& rng) const;

  private:
    explicit ArcSet(std::vector<std::pair<double, double>> arcs) : arcs_(std::move(arcs)) {}
    static ArcSet normalize(std::vector<std::pair<double, double>> raw);

    std::vector<std::pair<double, double>> arcs_;
};

// Piecewise-constant probability density with respect to m_K: a list of
// (support, weight) pieces with integral 1.
class KDensity {
  public:
    // Normalized indicator density of a set.
    static KDensity uniform_on(const ArcSet& support);
    // Pieces (set, density value); the integral must be 1 within 1e-12.
    static KDensity from_pieces(std::vector<std::pair<ArcSet, double>> pieces);

    double density_at(double theta) const;
    double essential_sup() const;
    double total_mass() const;
    const std::vector<std::pair<ArcSet, double>>& pieces() const { return pieces_; }

    double sample(Rng& rng) const;

  private:
    explicit KDensity(std::vector<std::pair<ArcSet, double>> pieces);

    std::vector<std::pair<ArcSet, double>> pieces_;
    std::vector<double> piece_mass_;  // cumulative
};

}  // namespace hypererg
