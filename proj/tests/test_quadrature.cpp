#include <doctest.h>

#include <cmath>

#include "ppx/errors.hpp"
#include "ppx/quadrature.hpp"

using namespace ppx;

TEST_CASE("1d polynomials and transcendentals") {
    CHECK(integrate_1d([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(integrate_1d([](double x) { return std::exp(x); }, 0.0, 2.0) ==
          doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-10));
}

TEST_CASE("2d separable integrand") {
    const double value = integrate_box(
        [](const Point& p) { return std::exp(-p[0] - p[1]); }, 2, {0, 0, 0},
        {1, 1, 0});
    const double expected = (1 - std::exp(-1.0)) * (1 - std::exp(-1.0));
    CHECK(value == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("3d constant") {
    const double value = integrate_box([](const Point&) { return 2.0; }, 3,
                                       {0, 0, 0}, {1, 2, 3});
    CHECK(value == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("breakpoints make a step function exact") {
    QuadratureOptions options;
    options.breakpoints[0] = {0.25};
    const double value = integrate_box(
        [](const Point& p) { return p[0] < 0.25 ? 1.0 : 3.0; }, 1, {0, 0, 0},
        {1, 0, 0}, options);
    CHECK(value == doctest::Approx(0.25 + 3.0 * 0.75).epsilon(1e-12));
}

TEST_CASE("radial kink converges with a graded mesh") {
    // e^{-||x||} on [-1,1]^2 has a derivative kink at the origin.
    QuadratureOptions options;
    for (int axis = 0; axis < 2; ++axis) {
        options.breakpoints[axis] = {0.0, 0.25, -0.25, 0.0625, -0.0625,
                                     0.015625, -0.015625};
    }
    const double value = integrate_box(
        [](const Point& p) {
            return std::exp(-std::sqrt(p[0] * p[0] + p[1] * p[1]));
        },
        2, {-1, -1, 0}, {1, 1, 0}, options);
    // Frozen reference from the polar decomposition
    // 8 * int_0^{pi/4} (1 - (1 + sec t) e^{-sec t}) dt of the same integral,
    // evaluated independently to 1e-14.
    const double reference = 1.93999754909198;
    CHECK(value == doctest::Approx(reference).epsilon(2e-8));
}

TEST_CASE("invalid bounds are rejected") {
    CHECK_THROWS_AS(integrate_1d([](double) { return 1.0; }, 1.0, 0.0), SpecError);
    CHECK_THROWS_AS(integrate_box([](const Point&) { return 1.0; }, 4, {0, 0, 0},
                                  {1, 1, 1}),
                    SpecError);
}
