// One-dimensional quadrature: adaptive Gauss-Kronrod and composite
// Gauss-Legendre panels.
#pragma once

#include <functional>
#include <stdexcept>

namespace hypererg {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive 7/15 Gauss-Kronrod on [a, b]. Subdivides until the Kronrod error
// estimate satisfies |err| <= max(abs_tol, rel_tol * |integral|) or the depth
// limit is hit, in which case a QuadratureError is thrown.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 0.0, int max_depth = 48);

// Composite Gauss-Legendre with 8 nodes per panel and panel width <= max_panel.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double max_panel = 0.1);

}  // namespace hypererg
