#include "hypererg/group.hpp"

#include <algorithm>
#include <cmath>

namespace hypererg {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDetDrift = 1e-13;
}  // namespace

double wrap_angle(double theta) {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t -= kPi;  // fmod can land exactly on pi after the shift
    return t;
}

GroupElement::GroupElement(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
    const double det = a_ * d_ - b_ * c_;
    if (!std::isfinite(det) || det <= 0.0)
        throw DomainError("GroupElement requires positive determinant");
    if (std::abs(det - 1.0) > 1e-6)
        throw DomainError("GroupElement entries are not unimodular (|det - 1| > 1e-6)");
    renormalize_if_drifted();
}

GroupElement GroupElement::normalized(double a, double b, double c, double d) {
    const double det = a * d - b * c;
    if (!std::isfinite(det) || det <= 0.0)
        throw DomainError("normalized() requires positive determinant");
    const double s = 1.0 / std::sqrt(det);
    return GroupElement(a * s, b * s, c * s, d * s, RawTag{});
}

GroupElement GroupElement::rotation(double theta) {
    const double co = std::cos(theta);
    const double si = std::sin(theta);
    return GroupElement(co, -si, si, co, RawTag{});
}

GroupElement GroupElement::boost(double r) {
    const double e = std::exp(0.5 * r);
    return GroupElement(e, 0.0, 0.0, 1.0 / e, RawTag{});
}

GroupElement GroupElement::translation(double t) {
    return GroupElement(1.0, t, 0.0, 1.0, RawTag{});
}

void GroupElement::renormalize_if_drifted() {
    const double det = a_ * d_ - b_ * c_;
    if (std::abs(det - 1.0) > kDetDrift) {
        const double s = 1.0 / std::sqrt(det);
        a_ *= s;
        b_ *= s;
        c_ *= s;
        d_ *= s;
    }
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
    GroupElement out(a_ * rhs.a_ + b_ * rhs.c_, a_ * rhs.b_ + b_ * rhs.d_,
                     c_ * rhs.a_ + d_ * rhs.c_, c_ * rhs.b_ + d_ * rhs.d_, RawTag{});
    out.renormalize_if_drifted();
    return out;
}

GroupElement GroupElement::inverse() const { return GroupElement(d_, -b_, -c_, a_, RawTag{}); }

GroupElement GroupElement::canonical() const {
    const bool flip = (a_ < 0.0) || (a_ == 0.0 && b_ < 0.0);
    return flip ? GroupElement(-a_, -b_, -c_, -d_, RawTag{}) : *this;
}

double class_distance(const GroupElement& g, const GroupElement& h) {
    const double dp[4] = {g.a() - h.a(), g.b() - h.b(), g.c() - h.c(), g.d() - h.d()};
    const double dm[4] = {g.a() + h.a(), g.b() + h.b(), g.c() + h.c(), g.d() + h.d()};
    double np = 0.0;
    double nm = 0.0;
    for (int i = 0; i < 4; ++i) {
        np += dp[i] * dp[i];
        nm += dm[i] * dm[i];
    }
    return std::sqrt(std::min(np, nm));
}

bool GroupElement::approx_equal(const GroupElement& rhs, double tol) const {
    return class_distance(*this, rhs) <= tol;
}

Point act(const GroupElement& g, const Point& z) {
    const double den_re = g.c() * z.x + g.d();
    const double den_im = g.c() * z.y;
    const double den = std::hypot(den_re, den_im);
    if (den < 1e-300) throw DegenerateEvaluation("Mobius action degenerate: |cz + d| underflow");
    const double den2 = den_re * den_re + den_im * den_im;
    const double num_re = g.a() * z.x + g.b();
    const double x = (num_re * den_re + g.a() * z.y * den_im) / den2;
    const double y = z.y * g.det() / den2;
    return Point(x, y);
}

double distance(const Point& p, const Point& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
    // Absorb rounding at coincident points.
    return std::acosh(std::max(arg, 1.0));
}

CartanCoords cartan_decompose(const GroupElement& g) {
    // Closed-form 2x2 SVD: g = R(alpha) diag(s1, 1/s1) R(beta) with
    //   alpha + beta = atan2(H, E), alpha - beta = atan2(G, F),
    //   s1 = sqrt(E^2 + H^2) + sqrt(F^2 + G^2),
    // where E,F = (a +- d)/2 and G,H = (c +- b)/2.
    const double e = 0.5 * (g.a() + g.d());
    const double f = 0.5 * (g.a() - g.d());
    const double gg = 0.5 * (g.c() + g.b());
    const double h = 0.5 * (g.c() - g.b());
    const double q = std::hypot(e, h);
    const double p = std::hypot(f, gg);
    const double s1 = q + p;
    const double r = 2.0 * std::log(s1);
    const double sum = std::atan2(h, e);
    if (p == 0.0 || r <= 0.0) {
        // Pure rotation: the split is non-unique, put the whole angle on the right.
        return CartanCoords{0.0, 0.0, wrap_angle(sum)};
    }
    const double diff = std::atan2(gg, f);
    return CartanCoords{wrap_angle(0.5 * (sum + diff)), r, wrap_angle(0.5 * (sum - diff))};
}

IwasawaCoords iwasawa_decompose(const GroupElement& g) {
    // First column of k_theta a_s n_u is e^{s/2} (cos theta, sin theta).
    const double col2 = g.a() * g.a() + g.c() * g.c();
    const double s = std::log(col2);
    const double theta = wrap_angle(std::atan2(g.c(), g.a()));
    const double u = (g.a() * g.b() + g.c() * g.d()) / col2;
    return IwasawaCoords{theta, s, u};
}

GroupElement reconstruct(const CartanCoords& coords) {
    return GroupElement::rotation(coords.theta1) * GroupElement::boost(coords.r) *
           GroupElement::rotation(coords.theta2);
}

GroupElement reconstruct(const IwasawaCoords& coords) {
    return GroupElement::rotation(coords.theta) * GroupElement::boost(coords.s) *
           GroupElement::translation(coords.u);
}

double rotation_angle(const GroupElement& g, double tol) {
    const Point moved = act(g, basepoint());
    if (distance(moved, basepoint()) > tol)
        throw DomainError("rotation_angle: element does not stabilize the basepoint");
    return wrap_angle(std::atan2(g.c(), g.a()));
}

RankOneProfile::RankOneProfile(int m1_in, int m2_in, double c_in) : m1(m1_in), m2(m2_in), c(c_in) {
    if (m1 < 1) throw DomainError("RankOneProfile requires m1 >= 1");
    if (m2 < 0) throw DomainError("RankOneProfile requires m2 >= 0");
    if (!(c > 0.0)) throw DomainError("RankOneProfile requires c > 0");
}

RankOneProfile RankOneProfile::hyperbolic_plane() { return RankOneProfile(1, 0, 1.0); }
RankOneProfile RankOneProfile::hyperbolic_3space(double c) { return RankOneProfile(2, 0, c); }
RankOneProfile RankOneProfile::su21(double c) { return RankOneProfile(2, 1, c); }
RankOneProfile RankOneProfile::sp21(double c) { return RankOneProfile(4, 3, c); }
RankOneProfile RankOneProfile::f4(double c) { return RankOneProfile(8, 7, c); }

double radius_to_horocycle(double r, const RankOneProfile& profile) {
    if (r < 0.0) throw DomainError("radius_to_horocycle requires r >= 0");
    return 2.0 * std::sinh(r / (2.0 * profile.c));
}

double horocycle_to_radius(double t, const RankOneProfile& profile) {
    if (t < 0.0) throw DomainError("horocycle_to_radius requires t >= 0");
    return 2.0 * profile.c * std::asinh(0.5 * t);
}

double angular_component_theta(double r) {
    if (!(r > 0.0)) throw DomainError("angular components require r > 0");
    // sin^2 theta = (1 - e^-r) / (e^r - e^-r) = 1 / (e^r + 1).
    return std::asin(1.0 / std::sqrt(std::exp(r) + 1.0));
}

std::pair<GroupElement, GroupElement> angular_components(double r) {
    const double theta = angular_component_theta(r);
    return {GroupElement::rotation(theta), GroupElement::rotation(theta + 0.5 * kPi)};
}

}  // namespace hypererg
