#include "ppx/pattern.hpp"

#include <algorithm>

#include "ppx/errors.hpp"

namespace ppx {

void PointPattern::validate() const {
    window.validate();
    for (const Point& p : points) {
        if (!window.contains(p)) {
            throw SpecError("pattern point outside its window");
        }
    }
    std::vector<Point> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) {
        return a.coords < b.coords;
    });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw SpecError("pattern is not simple: duplicate point coordinates");
    }
}

void to_json(nlohmann::json& j, const PointPattern& pattern) {
    nlohmann::json points = nlohmann::json::array();
    for (const Point& p : pattern.points) {
        nlohmann::json coords = nlohmann::json::array();
        for (int axis = 0; axis < pattern.window.dim; ++axis) {
            coords.push_back(p[axis]);
        }
        points.push_back(coords);
    }
    j = {{"points", points},
         {"window", pattern.window},
         {"seed", pattern.seed},
         {"spec_id", pattern.spec_id}};
}

void from_json(const nlohmann::json& j, PointPattern& pattern) {
    pattern = PointPattern{};
    pattern.window = j.at("window").get<Window>();
    pattern.seed = j.at("seed").get<std::uint64_t>();
    pattern.spec_id = j.value("spec_id", std::string{});
    for (const auto& coords : j.at("points")) {
        if (static_cast<int>(coords.size()) != pattern.window.dim) {
            throw SpecError("pattern point arity must match window dim");
        }
        Point p;
        for (int axis = 0; axis < pattern.window.dim; ++axis) {
            p[axis] = coords[axis].get<double>();
        }
        pattern.points.push_back(p);
    }
}

}  // namespace ppx
