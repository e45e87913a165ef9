#include "ppx/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "ppx/errors.hpp"

namespace ppx {

namespace {

struct GlRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Legendre nodes by Newton iteration from the Chebyshev-based initial guess.
GlRule compute_rule(int order) {
    GlRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_order(x) and its derivative.
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // Newton walks nodes from +1 downward; store them ascending.
    std::reverse(rule.nodes.begin(), rule.nodes.end());
    std::reverse(rule.weights.begin(), rule.weights.end());
    return rule;
}

const GlRule& rule_for(int order) {
    static std::mutex mutex;
    static std::map<int, GlRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, compute_rule(order)).first;
    }
    return it->second;
}

// Tensor rule at a fixed order over one smooth panel.
double panel_integral(const std::function<double(const Point&)>& f, int dim,
                      const std::array<double, 3>& lower,
                      const std::array<double, 3>& upper, int order) {
    const GlRule& rule = rule_for(order);
    std::array<double, 3> mid{};
    std::array<double, 3> half{};
    for (int axis = 0; axis < dim; ++axis) {
        mid[axis] = 0.5 * (lower[axis] + upper[axis]);
        half[axis] = 0.5 * (upper[axis] - lower[axis]);
    }
    double total = 0.0;
    if (dim == 1) {
        for (int i = 0; i < order; ++i) {
            Point p;
            p[0] = mid[0] + half[0] * rule.nodes[i];
            total += rule.weights[i] * f(p);
        }
        return total * half[0];
    }
    if (dim == 2) {
        for (int i = 0; i < order; ++i) {
            double row = 0.0;
            Point p;
            p[0] = mid[0] + half[0] * rule.nodes[i];
            for (int j = 0; j < order; ++j) {
                p[1] = mid[1] + half[1] * rule.nodes[j];
                row += rule.weights[j] * f(p);
            }
            total += rule.weights[i] * row;
        }
        return total * half[0] * half[1];
    }
    for (int i = 0; i < order; ++i) {
        Point p;
        p[0] = mid[0] + half[0] * rule.nodes[i];
        double plane = 0.0;
        for (int j = 0; j < order; ++j) {
            p[1] = mid[1] + half[1] * rule.nodes[j];
            double row = 0.0;
            for (int k = 0; k < order; ++k) {
                p[2] = mid[2] + half[2] * rule.nodes[k];
                row += rule.weights[k] * f(p);
            }
            plane += rule.weights[j] * row;
        }
        total += rule.weights[i] * plane;
    }
    return total * half[0] * half[1] * half[2];
}

// Axis partition: [lo, hi] split at interior breakpoints.
std::vector<double> axis_edges(double lo, double hi,
                               const std::vector<double>& breakpoints) {
    std::vector<double> edges{lo};
    std::vector<double> sorted = breakpoints;
    std::sort(sorted.begin(), sorted.end());
    for (double b : sorted) {
        if (b > lo + 1e-14 && b < hi - 1e-14 && b > edges.back() + 1e-14) {
            edges.push_back(b);
        }
    }
    edges.push_back(hi);
    return edges;
}

double sum_over_panels(const std::function<double(const Point&)>& f, int dim,
                       const std::array<std::vector<double>, 3>& edges,
                       int order) {
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};
    double total = 0.0;
    const std::size_t n0 = edges[0].size() - 1;
    const std::size_t n1 = dim > 1 ? edges[1].size() - 1 : 1;
    const std::size_t n2 = dim > 2 ? edges[2].size() - 1 : 1;
    for (std::size_t i = 0; i < n0; ++i) {
        lo[0] = edges[0][i];
        hi[0] = edges[0][i + 1];
        for (std::size_t j = 0; j < n1; ++j) {
            if (dim > 1) {
                lo[1] = edges[1][j];
                hi[1] = edges[1][j + 1];
            }
            for (std::size_t k = 0; k < n2; ++k) {
                if (dim > 2) {
                    lo[2] = edges[2][k];
                    hi[2] = edges[2][k + 1];
                }
                total += panel_integral(f, dim, lo, hi, order);
            }
        }
    }
    return total;
}

}  // namespace

const std::vector<double>& gl_nodes(int order) { return rule_for(order).nodes; }
const std::vector<double>& gl_weights(int order) { return rule_for(order).weights; }

double integrate_box(const std::function<double(const Point&)>& f, int dim,
                     const std::array<double, 3>& lower,
                     const std::array<double, 3>& upper,
                     const QuadratureOptions& options) {
    if (dim < 1 || dim > 3) throw SpecError("quadrature dim must be 1, 2, or 3");
    std::array<std::vector<double>, 3> edges{};
    for (int axis = 0; axis < dim; ++axis) {
        if (!(lower[axis] < upper[axis])) {
            throw SpecError("quadrature bounds must satisfy lower < upper");
        }
        edges[axis] = axis_edges(lower[axis], upper[axis], options.breakpoints[axis]);
    }
    double previous = sum_over_panels(f, dim, edges, 8);
    for (int order = 16; order <= options.max_order; order *= 2) {
        const double current = sum_over_panels(f, dim, edges, order);
        const double tolerance =
            options.rel_tol * std::abs(current) + options.abs_tol;
        if (std::abs(current - previous) <= tolerance) return current;
        previous = current;
    }
    throw NumericError("quadrature failed to converge by order limit");
}

double integrate_window(const std::function<double(const Point&)>& f,
                        const Window& window, const QuadratureOptions& options) {
    return integrate_box(f, window.dim, window.lower, window.upper, options);
}

double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                    const QuadratureOptions& options) {
    return integrate_box([&f](const Point& p) { return f(p[0]); }, 1,
                         {lo, 0.0, 0.0}, {hi, 0.0, 0.0}, options);
}

}  // namespace ppx
