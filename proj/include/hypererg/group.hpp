// PSL(2,R) as the orientation-preserving isometry group of the upper half
// plane: group elements, the Mobius action, hyperbolic distance, and the
// Cartan / Iwasawa / horocycle-polar coordinate systems.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace hypererg {

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateEvaluation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Upper half-plane point x + iy, y > 0.
struct Point {
    double x;
    double y;

    Point(double px, double py) : x(px), y(py) {
        if (!(y > 0.0)) throw DomainError("Point requires y > 0");
    }
};

inline Point basepoint() { return Point(0.0, 1.0); }

// An element of PSL(2,R): the pair +-(a b; c d) with ad - bc = 1.  The stored
// representative keeps |det - 1| <= 1e-12; products renormalize once the
// drift exceeds 1e-13.  Canonical sign: a > 0, or a = 0 and b > 0.
class GroupElement {
  public:
    // Identity.
    GroupElement() : a_(1.0), b_(0.0), c_(0.0), d_(1.0) {}

    // Entries must already be unimodular up to small drift.
    GroupElement(double a, double b, double c, double d);

    // Accepts any entries with positive determinant and scales them to det 1.
    static GroupElement normalized(double a, double b, double c, double d);

    // k_theta = (cos -sin; sin cos), the stabilizer of i; pi-periodic in PSL2.
    static GroupElement rotation(double theta);
    // a_r = diag(e^{r/2}, e^{-r/2}); moves i along the imaginary axis.
    static GroupElement boost(double r);
    // n_t = (1 t; 0 1); unit-speed horocycle through i.
    static GroupElement translation(double t);

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }

    double det() const { return a_ * d_ - b_ * c_; }

    GroupElement operator*(const GroupElement& rhs) const;
    GroupElement inverse() const;

    // Representative with the canonical sign.
    GroupElement canonical() const;

    bool approx_equal(const GroupElement& rhs, double tol = 1e-9) const;

  private:
    struct RawTag {};
    GroupElement(double a, double b, double c, double d, RawTag) : a_(a), b_(b), c_(c), d_(d) {}

    void renormalize_if_drifted();

    double a_, b_, c_, d_;
};

// Frobenius distance between the classes +-g and +-h (minimum over signs).
double class_distance(const GroupElement& g, const GroupElement& h);

// (az + b) / (cz + d).  Throws DegenerateEvaluation when |cz + d| underflows.
Point act(const GroupElement& g, const Point& z);

// Hyperbolic distance: arccosh(1 + (dx^2 + dy^2) / (2 y1 y2)).
double distance(const Point& p, const Point& q);

// g = k_{theta1} a_r k_{theta2} with r >= 0 and angles in [0, pi).
struct CartanCoords {
    double theta1;
    double r;
    double theta2;
};

// g = k_theta a_s n_u with theta in [0, pi).
struct IwasawaCoords {
    double theta;
    double s;
    double u;
};

CartanCoords cartan_decompose(const GroupElement& g);
IwasawaCoords iwasawa_decompose(const GroupElement& g);

GroupElement reconstruct(const CartanCoords& coords);
GroupElement reconstruct(const IwasawaCoords& coords);

// Rotation angle in [0, pi) of a K-element; throws if g does not stabilize i.
double rotation_angle(const GroupElement& g, double tol = 1e-9);

// Wrap an angle into [0, pi).
double wrap_angle(double theta);

// Radial geometry profile of a rank-one group: root multiplicities
// m1 = dim g_alpha, m2 = dim g_{2alpha}, and the metric scale c.
struct RankOneProfile {
    int m1;
    int m2;
    double c;

    RankOneProfile(int m1_in, int m2_in, double c_in);

    static RankOneProfile hyperbolic_plane();            // (1, 0, 1)
    static RankOneProfile hyperbolic_3space(double c = 1.0);   // (2, 0, c)
    static RankOneProfile su21(double c = 0.5);          // (2, 1, c)
    static RankOneProfile sp21(double c = 0.5);          // (4, 3, c)
    static RankOneProfile f4(double c = 0.5);            // (8, 7, c)

    // Polynomial growth exponent of the horocycle density psi.
    double kappa() const { return m2 > 0 ? m1 + 2 * m2 - 1 : 2 * m1 - 1; }
    double kappa_prime() const { return kappa() - 1.0; }

    // Window scale used by horocycle averages unless overridden.
    double default_window_scale() const { return 1.0 / (2.0 * c); }

    bool operator==(const RankOneProfile& o) const {
        return m1 == o.m1 && m2 == o.m2 && c == o.c;
    }
};

// t = 2 sinh(r / 2c) and its inverse; monotone bijections on [0, inf).
double radius_to_horocycle(double r, const RankOneProfile& profile);
double horocycle_to_radius(double t, const RankOneProfile& profile);

// Cartan angle of w_r in n_t = w_r a_r w'_r (t = 2 sinh(r/2), t > 0):
// theta_r = asin(1 / sqrt(e^r + 1)), and theta(w'_r) = theta_r + pi/2.
double angular_component_theta(double r);

// The pair (w_r, w'_r). Requires r > 0: the decomposition is discontinuous
// at the identity.
std::pair<GroupElement, GroupElement> angular_components(double r);

}  // namespace hypererg
