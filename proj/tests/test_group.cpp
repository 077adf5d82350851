#include <doctest.h>

#include <cmath>

#include "hypererg/group.hpp"
#include "hypererg/rng.hpp"

using namespace hypererg;

namespace {
constexpr double kPi = 3.14159265358979323846;

GroupElement random_element(Rng& rng) {
    // entries sampled then normalized; redraw until the determinant is
    // usefully positive
    for (;;) {
        const double a = rng.uniform(-1.0, 1.0);
        const double b = rng.uniform(-1.0, 1.0);
        const double c = rng.uniform(-1.0, 1.0);
        const double d = rng.uniform(-1.0, 1.0);
        if (a * d - b * c > 1e-3) return GroupElement::normalized(a, b, c, d);
    }
}
}  // namespace

TEST_CASE("identity acts trivially") {
    const Point z(0.3, 2.0);
    const Point w = act(GroupElement(), z);
    CHECK(w.x == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(w.y == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("n_t translates by t") {
    const Point w = act(GroupElement::translation(1.0), basepoint());
    CHECK(w.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.y == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("a_r with e^{r/2} = 2 sends i to 4i") {
    const double r = 2.0 * std::log(2.0);
    const Point w = act(GroupElement::boost(r), basepoint());
    CHECK(w.x == doctest::Approx(0.0));
    CHECK(w.y == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("point constructor rejects the lower half plane") {
    CHECK_THROWS_AS(Point(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(Point(1.0, -2.0), DomainError);
}

TEST_CASE("distance basics") {
    CHECK(distance(basepoint(), basepoint()) == 0.0);
    // d(1+i, i) = arccosh(3/2); cross-oracle 2 asinh(1/2)
    const double d = distance(Point(1.0, 1.0), basepoint());
    CHECK(d == doctest::Approx(std::acosh(1.5)).epsilon(1e-15));
    CHECK(d == doctest::Approx(2.0 * std::asinh(0.5)).epsilon(1e-14));
    CHECK(d == doctest::Approx(0.9624236501192069).epsilon(1e-12));
}

TEST_CASE("d(a_r i, i) = |r|") {
    for (double r : {-3.0, -0.5, 0.5, 3.0}) {
        const Point p = act(GroupElement::boost(r), basepoint());
        CHECK(distance(p, basepoint()) == doctest::Approx(std::abs(r)).epsilon(1e-13));
    }
}

TEST_CASE("distance is a symmetric metric") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const Point p(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
        const Point q(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
        const Point s(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
        CHECK(distance(p, q) == distance(q, p));
        CHECK(distance(p, s) <= distance(p, q) + distance(q, s) + 1e-12);
    }
}

TEST_CASE("distance is left invariant") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const GroupElement g = random_element(rng);
        const Point p(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
        const Point q(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
        CHECK(distance(act(g, p), act(g, q)) ==
              doctest::Approx(distance(p, q)).epsilon(1e-10));
    }
}

TEST_CASE("cartan of a pure rotation") {
    const CartanCoords c = cartan_decompose(GroupElement::rotation(0.7));
    CHECK(c.theta1 == 0.0);
    CHECK(c.r == 0.0);
    CHECK(c.theta2 == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("cartan of a boost") {
    const CartanCoords c = cartan_decompose(GroupElement::boost(2.0));
    CHECK(c.theta1 == doctest::Approx(0.0));
    CHECK(c.r == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.theta2 == doctest::Approx(0.0));
}

TEST_CASE("cartan of n_1 matches the horocycle relations") {
    const GroupElement n1 = GroupElement::translation(1.0);
    const CartanCoords c = cartan_decompose(n1);
    const double r = 2.0 * std::asinh(0.5);
    CHECK(c.r == doctest::Approx(r).epsilon(1e-12));
    // sin^2 theta1 = (1 - e^-r) / (e^r - e^-r)
    const double target = (1.0 - std::exp(-r)) / (std::exp(r) - std::exp(-r));
    CHECK(std::sin(c.theta1) * std::sin(c.theta1) ==
          doctest::Approx(target).epsilon(1e-10));
    CHECK(target == doctest::Approx(0.276393).epsilon(1e-5));
    CHECK(class_distance(reconstruct(c), n1) <= 1e-9);
}

TEST_CASE("cartan radius equals displacement of the basepoint") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const GroupElement g = random_element(rng);
        const CartanCoords c = cartan_decompose(g);
        CHECK(c.r == doctest::Approx(distance(act(g, basepoint()), basepoint()))
                         .epsilon(1e-9));
        CHECK(c.r >= 0.0);
        CHECK(c.theta1 >= 0.0);
        CHECK(c.theta1 < kPi);
        CHECK(c.theta2 >= 0.0);
        CHECK(c.theta2 < kPi);
    }
}

TEST_CASE("cartan round trip over 10^4 seeded elements") {
    Rng rng(42);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const GroupElement g = random_element(rng);
        const double resid = class_distance(reconstruct(cartan_decompose(g)), g);
        worst = std::max(worst, resid);
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("iwasawa basics") {
    const IwasawaCoords n3 = iwasawa_decompose(GroupElement::translation(3.0));
    CHECK(n3.theta == doctest::Approx(0.0));
    CHECK(n3.s == doctest::Approx(0.0));
    CHECK(n3.u == doctest::Approx(3.0).epsilon(1e-14));
    const IwasawaCoords k = iwasawa_decompose(GroupElement::rotation(0.2));
    CHECK(k.theta == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(k.s == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(k.u == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("iwasawa round trip over 10^4 seeded elements") {
    Rng rng(42);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const GroupElement g = random_element(rng);
        const double resid = class_distance(reconstruct(iwasawa_decompose(g)), g);
        worst = std::max(worst, resid);
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("horocycle parameter conversions") {
    const RankOneProfile h2 = RankOneProfile::hyperbolic_plane();
    CHECK(radius_to_horocycle(0.0, h2) == 0.0);
    CHECK(horocycle_to_radius(2.0, h2) == doctest::Approx(2.0 * std::asinh(1.0)).epsilon(1e-15));
    CHECK(horocycle_to_radius(2.0, h2) == doctest::Approx(1.762747).epsilon(1e-6));
    // items (1) <-> (4) of the conversion lemma
    const double r = horocycle_to_radius(1.0, h2);
    CHECK(r == doctest::Approx(distance(act(GroupElement::translation(1.0), basepoint()),
                                        basepoint()))
                   .epsilon(1e-12));
    CHECK_THROWS_AS(horocycle_to_radius(-1.0, h2), DomainError);
    CHECK_THROWS_AS(radius_to_horocycle(-0.1, h2), DomainError);
    // round trip with a scaled metric
    const RankOneProfile su = RankOneProfile::su21();
    for (double t : {0.1, 1.0, 7.5}) {
        CHECK(radius_to_horocycle(horocycle_to_radius(t, su), su) ==
              doctest::Approx(t).epsilon(1e-13));
    }
}

TEST_CASE("coordinate coherence on a grid") {
    const RankOneProfile h2 = RankOneProfile::hyperbolic_plane();
    for (int i = 1; i <= 300; ++i) {
        const double r = 30.0 * i / 300.0;
        const double t = radius_to_horocycle(r, h2);
        const double d = distance(act(GroupElement::translation(t), basepoint()), basepoint());
        CHECK(std::abs(d - r) <= 1e-9);
    }
}

TEST_CASE("angular components reconstruct n_t") {
    const double r = 2.0 * std::asinh(0.5);
    const auto [w, wp] = angular_components(r);
    const GroupElement rebuilt = w * GroupElement::boost(r) * wp;
    CHECK(class_distance(rebuilt, GroupElement::translation(1.0)) <= 1e-9);
    CHECK(rotation_angle(w) == doctest::Approx(0.553574).epsilon(1e-5));
}

TEST_CASE("angular components for a range of radii") {
    const RankOneProfile h2 = RankOneProfile::hyperbolic_plane();
    for (double r : {0.05, 0.3, 1.0, 2.5, 7.0, 15.0}) {
        const double t = radius_to_horocycle(r, h2);
        const auto [w, wp] = angular_components(r);
        const GroupElement rebuilt = w * GroupElement::boost(r) * wp;
        CHECK(class_distance(rebuilt, GroupElement::translation(t)) <= 1e-9);
    }
}

TEST_CASE("angular components converge to identity and half turn") {
    const auto [w, wp] = angular_components(20.0);
    CHECK(class_distance(w, GroupElement()) <= 1e-4);
    CHECK(class_distance(wp, GroupElement::rotation(0.5 * kPi)) <= 1e-4);
    CHECK_THROWS_AS(angular_components(0.0), DomainError);
    CHECK_THROWS_AS(angular_components(-1.0), DomainError);
}

TEST_CASE("angular asymptotics: theta^2 <= 4 e^{-r}") {
    for (int i = 0; i <= 290; ++i) {
        const double r = 1.0 + i * 0.1;
        const double th = angular_component_theta(r);
        CHECK(th * th <= 4.0 * std::exp(-r));
    }
}

TEST_CASE("group element determinant stays pinned") {
    // long random walk with bounded entries: small steps keep the product in
    // range while determinant drift accumulates and must be absorbed
    Rng rng(5);
    GroupElement g;
    for (int i = 0; i < 4000; ++i) {
        g = g * GroupElement::rotation(rng.uniform(0, kPi));
        g = g * GroupElement::boost(rng.uniform(-0.05, 0.05));
        g = g * GroupElement::translation(rng.uniform(-0.05, 0.05));
    }
    CHECK(std::abs(g.det() - 1.0) <= 1e-12);
}

TEST_CASE("canonical representative sign") {
    const GroupElement g = GroupElement::normalized(-2.0, 0.0, 0.5, -0.5);
    CHECK(g.canonical().a() > 0.0);
    CHECK(class_distance(g.canonical(), g) == 0.0);
    // a exactly zero: tie broken by b > 0
    const GroupElement s(0.0, -2.0, 0.5, 0.0);
    CHECK(s.canonical().b() > 0.0);
}

TEST_CASE("degenerate Mobius evaluation is rejected") {
    CHECK_THROWS_AS(GroupElement(1.0, 0.0, 0.0, 2.0), DomainError);       // det 2
    CHECK_THROWS_AS(GroupElement::normalized(1.0, 0.0, 0.0, -1.0), DomainError);  // det < 0
    // |cz + d| underflow: c = 1, d = -x0 puts the denominator at i*y
    const GroupElement g = GroupElement::normalized(0.0, -1.0, 1.0, -0.25);
    CHECK_THROWS_AS(act(g, Point(0.25, 1e-305)), DegenerateEvaluation);
}
