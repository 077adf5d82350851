// Concrete measure-preserving actions with analytically known means: the
// modular surface PSL(2,Z)\PSL(2,R) under the right G-action, and linear
// flows on the 2-torus.
#pragma once

#include <functional>
#include <string>
#include <utility>

#include "hypererg/group.hpp"
#include "hypererg/rng.hpp"

namespace hypererg {

// Reduce z to the standard fundamental domain |Re| <= 1/2, |z| >= 1.
// Returns (z', gamma) with gamma in PSL(2,Z) and gamma z = z'.
std::pair<Point, GroupElement> reduce(const Point& z);

// A point of the modular surface: the coset Gamma rep, with the reduced
// base point rep * i cached.
struct ModularPoint {
    GroupElement rep;
    Point base;

    explicit ModularPoint(const GroupElement& representative);
};

ModularPoint modular_basepoint();

// The action x -> g^{-1} x realized as rep -> rep g^{-1} followed by
// re-reduction of the representative.
ModularPoint modular_apply(const ModularPoint& x, const GroupElement& g);

// Base point from normalized hyperbolic area on the fundamental domain by
// rejection (acceptance ~ 0.9069), fiber angle uniform on [0, pi).
ModularPoint haar_sample_modular(Rng& rng);

// Horocycle flow h_t: rep -> rep n_t, so that
// modular_apply(x, n_t) == horocycle_flow_modular(x, -t).
ModularPoint horocycle_flow_modular(const ModularPoint& x, double t);

struct TorusPoint {
    double x;
    double y;

    TorusPoint(double px, double py);
};

// (x + t, y + slope t) mod 1; ergodic for irrational slope.
TorusPoint torus_flow(const TorusPoint& p, double t, double slope);

inline double default_torus_slope() { return 1.4142135623730951; }  // sqrt(2)

// A bounded observable with known space average.
template <class X>
struct Observable {
    std::string name;
    std::function<double(const X&)> eval;
    double exact_mean;
    double sup_norm;
};

// Indicator of the cusp rectangle {Im > Y0} in the fundamental domain;
// exact mean 3 / (pi Y0).  Requires Y0 >= 1.
Observable<ModularPoint> cusp_observable(double y0);

// Continuous cusp ramp max(0, 1 - Y0 / Im); exact mean 3 / (2 pi Y0).
Observable<ModularPoint> cusp_ramp_observable(double y0);

Observable<ModularPoint> constant_observable_modular(double value);

// cos(2 pi k1 x) cos(2 pi k2 y); exact mean 0 unless k1 = k2 = 0.
Observable<TorusPoint> torus_trig_observable(int k1, int k2);

Observable<TorusPoint> constant_observable_torus(double value);

// Adapters used by the generic estimators.
struct ModularAction {
    ModularPoint apply(const ModularPoint& x, const GroupElement& g) const {
        return modular_apply(x, g);
    }
};

}  // namespace hypererg
