#pragma once

#include <array>
#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

namespace ppx {

// A point in up to three dimensions.  Unused trailing coordinates stay zero,
// so distance code can loop over the window dimension only.
struct Point {
    std::array<double, 3> coords{0.0, 0.0, 0.0};

    double& operator[](std::size_t i) { return coords[i]; }
    double operator[](std::size_t i) const { return coords[i]; }

    friend bool operator==(const Point&, const Point&) = default;
};

enum class Metric { euclidean, toroidal };

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);

// Axis-aligned observation window.  The toroidal metric identifies opposite
// faces, which removes boundary effects in stationary experiments.
struct Window {
    int dim = 2;
    std::array<double, 3> lower{0.0, 0.0, 0.0};
    std::array<double, 3> upper{1.0, 1.0, 1.0};
    Metric metric = Metric::euclidean;

    // Throws SpecError unless 1 <= dim <= 3 and lower < upper per axis.
    void validate() const;

    double side(int axis) const { return upper[axis] - lower[axis]; }
    double volume() const;
    Point center() const;

    bool contains(const Point& p) const;

    // Maps a point into the window under the toroidal identification.
    // Identity for euclidean windows.
    Point wrap(const Point& p) const;

    // Squared distance between two points under the window metric.
    double dist2(const Point& a, const Point& b) const;
    double dist(const Point& a, const Point& b) const;

    // Absolute coordinate difference along one axis under the window metric.
    double axis_dist(const Point& a, const Point& b, int axis) const;

    friend bool operator==(const Window&, const Window&) = default;
};

// Convenience factories.
Window make_box(int dim, double lo, double hi, Metric metric = Metric::euclidean);

// Point arrays in JSON carry exactly `dim` coordinates, so Point conversion
// lives with the pattern serialisation code that knows the window.
void to_json(nlohmann::json& j, const Window& w);
void from_json(const nlohmann::json& j, Window& w);

}  // namespace ppx
