#include "hypererg/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hypererg {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct GaussKronrod {
    double integral;
    double error;
};

GaussKronrod gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double offset = half * kKronrodNodes[i];
        double fsum;
        if (i == 7) {
            fsum = f(mid);
        } else {
            fsum = f(mid - offset) + f(mid + offset);
        }
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    const double diff = kronrod - gauss;
    return {kronrod, std::abs(diff)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double rel_tol,
             double abs_tol, int depth, double whole_estimate) {
    const GaussKronrod gk = gk15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::max(std::abs(whole_estimate), std::abs(gk.integral)));
    if (gk.error <= tol || gk.error <= 1e-300) return gk.integral;
    if (depth <= 0) throw QuadratureError("adaptive quadrature failed to converge");
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, rel_tol, abs_tol, depth - 1, whole_estimate) +
           adapt(f, mid, b, rel_tol, abs_tol, depth - 1, whole_estimate);
}

constexpr double kGl8Nodes[4] = {
    0.183434642495649804939476142360184,
    0.525532409916328985817739049189246,
    0.796666477413626739591553936475830,
    0.960289856497536231683560868569473,
};
constexpr double kGl8Weights[4] = {
    0.362683783378361982965150449277196,
    0.313706645877887287337962201986601,
    0.222381034453374470544355994426241,
    0.101228536290376259152531354309962,
};

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const GaussKronrod first = gk15(f, a, b);
    // Refine against the first whole-interval estimate so that rel_tol means
    // "relative to the full integral", not per-panel.
    const double tol = std::max(abs_tol, rel_tol * std::abs(first.integral));
    if (first.error <= tol || first.error <= 1e-300) return first.integral;
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, rel_tol, abs_tol, max_depth, first.integral) +
           adapt(f, mid, b, rel_tol, abs_tol, max_depth, first.integral);
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double max_panel) {
    if (a == b) return 0.0;
    if (max_panel <= 0.0) throw QuadratureError("panel width must be positive");
    const double span = b - a;
    const long panels = std::max(1L, static_cast<long>(std::ceil(std::abs(span) / max_panel)));
    const double h = span / static_cast<double>(panels);
    double total = 0.0;
    for (long p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        const double half = 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double off = half * kGl8Nodes[i];
            acc += kGl8Weights[i] * (f(mid - off) + f(mid + off));
        }
        total += acc * half;
    }
    return total;
}

}  // namespace hypererg
