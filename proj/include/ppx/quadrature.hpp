#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ppx/geometry.hpp"

namespace ppx {

struct QuadratureOptions {
    // Converged when successive orders differ by rel_tol * |I| + abs_tol.
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    // Highest Gauss-Legendre order per axis before giving up.
    int max_order = 128;
    // Axis-aligned abscissae where the integrand may be non-smooth; the
    // domain is split there so each panel sees a smooth function.
    std::array<std::vector<double>, 3> breakpoints{};
};

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
const std::vector<double>& gl_nodes(int order);
const std::vector<double>& gl_weights(int order);

// Integral of f over the axis-aligned box [lower, upper]^dim by tensor
// Gauss-Legendre with order escalation.  Throws NumericError if the
// tolerance is not reached by max_order.
double integrate_box(const std::function<double(const Point&)>& f, int dim,
                     const std::array<double, 3>& lower,
                     const std::array<double, 3>& upper,
                     const QuadratureOptions& options = {});

// Same integral over a window's box (metric ignored).
double integrate_window(const std::function<double(const Point&)>& f,
                        const Window& window,
                        const QuadratureOptions& options = {});

// One-dimensional convenience wrapper.
double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                    const QuadratureOptions& options = {});

}  // namespace ppx
