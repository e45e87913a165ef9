#include "ppx/geometry.hpp"

#include <cmath>

#include "ppx/errors.hpp"

namespace ppx {

std::string to_string(Metric metric) {
    return metric == Metric::euclidean ? "euclidean" : "toroidal";
}

Metric metric_from_string(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "toroidal") return Metric::toroidal;
    throw SpecError("unknown metric: " + name);
}

void Window::validate() const {
    if (dim < 1 || dim > 3) {
        throw SpecError("window dim must be 1, 2, or 3");
    }
    for (int axis = 0; axis < dim; ++axis) {
        if (!(lower[axis] < upper[axis])) {
            throw SpecError("window must satisfy lower < upper on every axis");
        }
        if (!std::isfinite(lower[axis]) || !std::isfinite(upper[axis])) {
            throw SpecError("window bounds must be finite");
        }
    }
}

double Window::volume() const {
    double v = 1.0;
    for (int axis = 0; axis < dim; ++axis) v *= side(axis);
    return v;
}

Point Window::center() const {
    Point c;
    for (int axis = 0; axis < dim; ++axis) {
        c[axis] = 0.5 * (lower[axis] + upper[axis]);
    }
    return c;
}

bool Window::contains(const Point& p) const {
    for (int axis = 0; axis < dim; ++axis) {
        if (p[axis] < lower[axis] || p[axis] >= upper[axis]) return false;
    }
    return true;
}

Point Window::wrap(const Point& p) const {
    if (metric == Metric::euclidean) return p;
    Point out = p;
    for (int axis = 0; axis < dim; ++axis) {
        const double len = side(axis);
        double t = std::fmod(p[axis] - lower[axis], len);
        if (t < 0.0) t += len;
        out[axis] = lower[axis] + t;
    }
    return out;
}

double Window::dist2(const Point& a, const Point& b) const {
    double total = 0.0;
    for (int axis = 0; axis < dim; ++axis) {
        double d = a[axis] - b[axis];
        if (metric == Metric::toroidal) {
            const double len = side(axis);
            d = std::fmod(d, len);
            if (d < -0.5 * len) d += len;
            if (d > 0.5 * len) d -= len;
        }
        total += d * d;
    }
    return total;
}

double Window::dist(const Point& a, const Point& b) const {
    return std::sqrt(dist2(a, b));
}

double Window::axis_dist(const Point& a, const Point& b, int axis) const {
    double d = a[axis] - b[axis];
    if (metric == Metric::toroidal) {
        const double len = side(axis);
        d = std::fmod(d, len);
        if (d < -0.5 * len) d += len;
        if (d > 0.5 * len) d -= len;
    }
    return std::fabs(d);
}

Window make_box(int dim, double lo, double hi, Metric metric) {
    Window w;
    w.dim = dim;
    w.metric = metric;
    for (int axis = 0; axis < dim; ++axis) {
        w.lower[axis] = lo;
        w.upper[axis] = hi;
    }
    w.validate();
    return w;
}

void to_json(nlohmann::json& j, const Window& w) {
    nlohmann::json lower = nlohmann::json::array();
    nlohmann::json upper = nlohmann::json::array();
    for (int axis = 0; axis < w.dim; ++axis) {
        lower.push_back(w.lower[axis]);
        upper.push_back(w.upper[axis]);
    }
    j = {{"dim", w.dim},
         {"lower", lower},
         {"upper", upper},
         {"metric", to_string(w.metric)}};
}

void from_json(const nlohmann::json& j, Window& w) {
    w = Window{};
    w.dim = j.at("dim").get<int>();
    if (w.dim < 1 || w.dim > 3) {
        throw SpecError("window dim must be 1, 2, or 3");
    }
    const auto& lower = j.at("lower");
    const auto& upper = j.at("upper");
    if (static_cast<int>(lower.size()) != w.dim ||
        static_cast<int>(upper.size()) != w.dim) {
        throw SpecError("window bounds must have dim entries");
    }
    for (int axis = 0; axis < w.dim; ++axis) {
        w.lower[axis] = lower[axis].get<double>();
        w.upper[axis] = upper[axis].get<double>();
    }
    if (j.contains("metric")) {
        w.metric = metric_from_string(j.at("metric").get<std::string>());
    }
    w.validate();
}

}  // namespace ppx
