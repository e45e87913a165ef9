#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppx/geometry.hpp"

namespace ppx {

// A finite realization of a point process inside a window, tagged with the
// seed and spec that generated it.
struct PointPattern {
    std::vector<Point> points;
    Window window;
    std::uint64_t seed = 0;
    std::string spec_id;

    std::size_t size() const { return points.size(); }

    // Checks the simple-pattern and containment invariants; O(n log n).
    void validate() const;
};

void to_json(nlohmann::json& j, const PointPattern& pattern);
void from_json(const nlohmann::json& j, PointPattern& pattern);

}  // namespace ppx
