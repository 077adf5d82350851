// Python bindings for the main operations.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypererg/config.hpp"
#include "hypererg/dynamics.hpp"
#include "hypererg/estimators.hpp"
#include "hypererg/group.hpp"
#include "hypererg/measures.hpp"

namespace py = pybind11;
using namespace hypererg;

namespace {

MeasureFamily family_from_kwargs(const std::string& kind, const std::string& profile,
                                 double epsilon, double b,
                                 const std::vector<double>& u_arcs,
                                 const std::vector<double>& v_arcs) {
    FamilyDescriptor desc;
    desc.kind = kind;
    desc.profile = profile;
    desc.epsilon = epsilon;
    desc.b = b;
    desc.u_arcs = u_arcs;
    desc.v_arcs = v_arcs;
    return resolve_family(desc);
}

}  // namespace

PYBIND11_MODULE(_hypererg, m) {
    m.doc() = "Averaging families on PSL(2,R) and their ergodic averages";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Point>(m, "Point")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readonly("x", &Point::x)
        .def_readonly("y", &Point::y)
        .def("__repr__", [](const Point& p) {
            return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
        });

    py::class_<GroupElement>(m, "GroupElement")
        .def(py::init<>())
        .def(py::init<double, double, double, double>(), py::arg("a"), py::arg("b"),
             py::arg("c"), py::arg("d"))
        .def_static("rotation", &GroupElement::rotation, py::arg("theta"))
        .def_static("boost", &GroupElement::boost, py::arg("r"))
        .def_static("translation", &GroupElement::translation, py::arg("t"))
        .def_property_readonly("a", &GroupElement::a)
        .def_property_readonly("b", &GroupElement::b)
        .def_property_readonly("c", &GroupElement::c)
        .def_property_readonly("d", &GroupElement::d)
        .def("inverse", &GroupElement::inverse)
        .def("__mul__", &GroupElement::operator*)
        .def("entries", [](const GroupElement& g) {
            return py::make_tuple(g.a(), g.b(), g.c(), g.d());
        });

    m.def("act", &act, py::arg("g"), py::arg("z"));
    m.def("distance", &distance, py::arg("p"), py::arg("q"));
    m.def("class_distance", &class_distance, py::arg("g"), py::arg("h"));
    m.def("basepoint", &basepoint);

    m.def("cartan_decompose", [](const GroupElement& g) {
        const CartanCoords c = cartan_decompose(g);
        return py::make_tuple(c.theta1, c.r, c.theta2);
    });
    m.def("iwasawa_decompose", [](const GroupElement& g) {
        const IwasawaCoords c = iwasawa_decompose(g);
        return py::make_tuple(c.theta, c.s, c.u);
    });
    m.def("reconstruct_cartan", [](double theta1, double r, double theta2) {
        return reconstruct(CartanCoords{theta1, r, theta2});
    });

    py::class_<RankOneProfile>(m, "RankOneProfile")
        .def(py::init<int, int, double>(), py::arg("m1"), py::arg("m2"), py::arg("c"))
        .def_readonly("m1", &RankOneProfile::m1)
        .def_readonly("m2", &RankOneProfile::m2)
        .def_readonly("c", &RankOneProfile::c)
        .def_property_readonly("kappa", &RankOneProfile::kappa)
        .def_static("hyperbolic_plane", &RankOneProfile::hyperbolic_plane)
        .def_static("hyperbolic_3space", &RankOneProfile::hyperbolic_3space,
                    py::arg("c") = 1.0)
        .def_static("su21", &RankOneProfile::su21, py::arg("c") = 0.5)
        .def_static("sp21", &RankOneProfile::sp21, py::arg("c") = 0.5)
        .def_static("f4", &RankOneProfile::f4, py::arg("c") = 0.5);

    m.def("radius_to_horocycle", &radius_to_horocycle, py::arg("r"), py::arg("profile"));
    m.def("horocycle_to_radius", &horocycle_to_radius, py::arg("t"), py::arg("profile"));
    m.def("angular_component_theta", &angular_component_theta, py::arg("r"));

    m.def("kak_density", &kak_density, py::arg("profile"), py::arg("t"));
    m.def("psi_density", &psi_density, py::arg("profile"), py::arg("t"));
    m.def("normalization_identity_residual", &normalization_identity_residual,
          py::arg("profile"), py::arg("R"));
    m.def("shell_mass_ratio", &shell_mass_ratio, py::arg("profile"), py::arg("r"),
          py::arg("eps"), py::arg("b"));

    m.def("sample_family",
          [](const std::string& kind, const std::string& profile, double r, double epsilon,
             double b, const std::vector<double>& u_arcs, const std::vector<double>& v_arcs,
             std::size_t n, std::uint64_t seed) {
              const MeasureFamily fam =
                  family_from_kwargs(kind, profile, epsilon, b, u_arcs, v_arcs);
              const PreparedFamily prepared(fam, r);
              Rng rng(seed);
              std::vector<std::tuple<double, double, double, double>> out;
              out.reserve(n);
              for (std::size_t i = 0; i < n; ++i) {
                  const GroupElement g = prepared.sample(rng);
                  out.emplace_back(g.a(), g.b(), g.c(), g.d());
              }
              return out;
          },
          py::arg("kind"), py::arg("profile"), py::arg("r"), py::arg("epsilon") = 1.0,
          py::arg("b") = 0.0, py::arg("u_arcs") = std::vector<double>{},
          py::arg("v_arcs") = std::vector<double>{}, py::arg("n") = 1,
          py::arg("seed") = 1,
          "Draw matrices k1 a_t k2 from a family; arcs are given in units of pi.");

    m.def("sector_domination",
          [](const std::vector<double>& u_arcs, const std::vector<double>& v_arcs, double r,
             double eps) {
              std::vector<std::pair<double, double>> up;
              for (std::size_t i = 0; i + 1 < u_arcs.size(); i += 2)
                  up.emplace_back(u_arcs[i], u_arcs[i + 1]);
              std::vector<std::pair<double, double>> vp;
              for (std::size_t i = 0; i + 1 < v_arcs.size(); i += 2)
                  vp.emplace_back(v_arcs[i], v_arcs[i + 1]);
              const SectorDomination dom =
                  sector_domination(ArcSet::from_pairs(up), ArcSet::from_pairs(vp), r, eps);
              return py::make_tuple(dom.c_r, dom.u_r.measure(), dom.v_r.measure());
          },
          py::arg("u_arcs"), py::arg("v_arcs"), py::arg("r"), py::arg("eps"),
          "Arc endpoints in radians; returns (C_r, m(U_r), m(V_r)).");

    py::class_<ModularPoint>(m, "ModularPoint")
        .def(py::init<const GroupElement&>(), py::arg("rep"))
        .def_readonly("rep", &ModularPoint::rep)
        .def_property_readonly("base", [](const ModularPoint& p) { return p.base; });

    m.def("modular_basepoint", &modular_basepoint);
    m.def("modular_apply", &modular_apply, py::arg("x"), py::arg("g"));
    m.def("horocycle_flow_modular", &horocycle_flow_modular, py::arg("x"), py::arg("t"));
    m.def("reduce", [](const Point& z) {
        auto [reduced, gamma] = reduce(z);
        return py::make_tuple(reduced, gamma);
    });
    m.def("haar_sample_modular", [](std::uint64_t seed, std::size_t n) {
        Rng rng(seed);
        std::vector<ModularPoint> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(haar_sample_modular(rng));
        return out;
    }, py::arg("seed") = 1, py::arg("n") = 1);

    m.def("estimate_cusp_average",
          [](const std::string& kind, const std::string& profile, double y0, double r,
             double epsilon, const std::vector<double>& u_arcs,
             const std::vector<double>& v_arcs, std::size_t n, std::uint64_t seed,
             int workers) {
              const MeasureFamily fam =
                  family_from_kwargs(kind, profile, epsilon, 0.0, u_arcs, v_arcs);
              const auto obs = cusp_observable(y0);
              const AverageEstimate est = estimate_average(
                  fam, ModularAction{}, obs, modular_basepoint(), r, n, seed, workers);
              return py::make_tuple(est.mean, est.std_error);
          },
          py::arg("kind"), py::arg("profile") = "psl2", py::arg("y0") = 2.0, py::arg("r") = 8.0,
          py::arg("epsilon") = 0.5, py::arg("u_arcs") = std::vector<double>{},
          py::arg("v_arcs") = std::vector<double>{}, py::arg("n") = 100000, py::arg("seed") = 1,
          py::arg("workers") = 1);

    m.def("weighted_birkhoff_torus",
          [](int k1, int k2, double T, double kappa, double slope, double x0, double y0) {
              const auto obs = torus_trig_observable(k1, k2);
              return weighted_birkhoff(TorusFlowAction{slope}, obs, TorusPoint(x0, y0), T,
                                       BirkhoffWeight::monomial(kappa));
          },
          py::arg("k1") = 1, py::arg("k2") = 1, py::arg("T") = 1000.0, py::arg("kappa") = 1.0,
          py::arg("slope") = 1.4142135623730951, py::arg("x0") = 0.0, py::arg("y0") = 0.0);
}
