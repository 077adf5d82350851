#include "hypererg/dynamics.hpp"

#include <cmath>

namespace hypererg {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kWallSlack = 1e-12;
constexpr int kMaxReductionSteps = 100000;
constexpr double kHalfSqrt3 = 0.86602540378443864676;
}  // namespace

std::pair<Point, GroupElement> reduce(const Point& z) {
    double x = z.x;
    double y = z.y;
    // gamma tracked as integer entries (exact in doubles well past any
    // magnitude this loop produces for y >= 1e-12).
    double ga = 1.0, gb = 0.0, gc = 0.0, gd = 1.0;
    for (int step = 0; step < kMaxReductionSteps; ++step) {
        const double shift = std::nearbyint(x);
        if (shift != 0.0) {
            x -= shift;
            ga -= shift * gc;
            gb -= shift * gd;
        }
        // Boundary ties go toward Re = -1/2.
        if (x > 0.5 - kWallSlack && x <= 0.5 + kWallSlack) {
            x -= 1.0;
            ga -= gc;
            gb -= gd;
        }
        const double norm2 = x * x + y * y;
        if (norm2 >= 1.0 - kWallSlack) {
            return {Point(x, y), GroupElement::normalized(ga, gb, gc, gd)};
        }
        // z -> -1/z
        const double nx = -x / norm2;
        const double ny = y / norm2;
        const double na = -gc, nb = -gd, nc = ga, nd = gb;
        ga = na;
        gb = nb;
        gc = nc;
        gd = nd;
        x = nx;
        y = ny;
    }
    throw DegenerateEvaluation("modular reduction failed to terminate");
}

ModularPoint::ModularPoint(const GroupElement& representative)
    : rep(representative), base(act(representative, basepoint())) {
    auto [reduced, gamma] = reduce(base);
    rep = gamma * rep;
    base = reduced;
}

ModularPoint modular_basepoint() { return ModularPoint(GroupElement()); }

ModularPoint modular_apply(const ModularPoint& x, const GroupElement& g) {
    return ModularPoint(x.rep * g.inverse());
}

ModularPoint haar_sample_modular(Rng& rng) {
    // x uniform on [-1/2, 1/2], y with density 1/y^2 on [sqrt(3)/2, inf),
    // accept iff |z| >= 1.
    for (;;) {
        const double x = rng.uniform() - 0.5;
        const double y = kHalfSqrt3 / (1.0 - rng.uniform());
        if (x * x + y * y >= 1.0) {
            const double theta = rng.uniform(0.0, kPi);
            const GroupElement rep = GroupElement::translation(x) *
                                     GroupElement::boost(std::log(y)) *
                                     GroupElement::rotation(theta);
            return ModularPoint(rep);
        }
    }
}

ModularPoint horocycle_flow_modular(const ModularPoint& x, double t) {
    return ModularPoint(x.rep * GroupElement::translation(t));
}

TorusPoint::TorusPoint(double px, double py) {
    x = px - std::floor(px);
    y = py - std::floor(py);
    if (x >= 1.0) x = 0.0;
    if (y >= 1.0) y = 0.0;
}

TorusPoint torus_flow(const TorusPoint& p, double t, double slope) {
    return TorusPoint(p.x + t, p.y + slope * t);
}

Observable<ModularPoint> cusp_observable(double y0) {
    if (y0 < 1.0) throw DomainError("cusp observable requires Y0 >= 1");
    return Observable<ModularPoint>{
        "modular/cusp:" + std::to_string(y0),
        [y0](const ModularPoint& p) { return p.base.y > y0 ? 1.0 : 0.0; },
        3.0 / (kPi * y0),
        1.0,
    };
}

Observable<ModularPoint> cusp_ramp_observable(double y0) {
    if (y0 < 1.0) throw DomainError("cusp ramp observable requires Y0 >= 1");
    return Observable<ModularPoint>{
        "modular/ramp:" + std::to_string(y0),
        [y0](const ModularPoint& p) { return std::max(0.0, 1.0 - y0 / p.base.y); },
        3.0 / (2.0 * kPi * y0),
        1.0,
    };
}

Observable<ModularPoint> constant_observable_modular(double value) {
    return Observable<ModularPoint>{
        "const:" + std::to_string(value),
        [value](const ModularPoint&) { return value; },
        value,
        std::abs(value),
    };
}

Observable<TorusPoint> torus_trig_observable(int k1, int k2) {
    const double mean = (k1 == 0 && k2 == 0) ? 1.0 : 0.0;
    return Observable<TorusPoint>{
        "torus/trig:" + std::to_string(k1) + "," + std::to_string(k2),
        [k1, k2](const TorusPoint& p) {
            return std::cos(2.0 * kPi * k1 * p.x) * std::cos(2.0 * kPi * k2 * p.y);
        },
        mean,
        1.0,
    };
}

Observable<TorusPoint> constant_observable_torus(double value) {
    return Observable<TorusPoint>{
        "const:" + std::to_string(value),
        [value](const TorusPoint&) { return value; },
        value,
        std::abs(value),
    };
}

}  // namespace hypererg
