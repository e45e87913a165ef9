#include <doctest.h>

#include <cmath>

#include "ppx/errors.hpp"
#include "ppx/geometry.hpp"

using namespace ppx;

TEST_CASE("window volume and center") {
    const Window w = make_box(2, -1.0, 1.0);
    CHECK(w.volume() == doctest::Approx(4.0));
    CHECK(w.center()[0] == doctest::Approx(0.0));

    Window box3;
    box3.dim = 3;
    box3.lower = {0.0, 0.0, 0.0};
    box3.upper = {1.0, 2.0, 3.0};
    CHECK(box3.volume() == doctest::Approx(6.0));
}

TEST_CASE("invalid windows are rejected") {
    Window w;
    w.dim = 0;
    CHECK_THROWS_AS(w.validate(), SpecError);
    w.dim = 2;
    w.lower = {1.0, 0.0, 0.0};
    w.upper = {0.0, 1.0, 0.0};
    CHECK_THROWS_AS(w.validate(), SpecError);
}

TEST_CASE("toroidal wrap maps into the window") {
    const Window w = make_box(2, -1.0, 1.0, Metric::toroidal);
    Point p;
    p[0] = 1.5;
    p[1] = -3.25;
    const Point q = w.wrap(p);
    CHECK(q[0] == doctest::Approx(-0.5));
    CHECK(q[1] == doctest::Approx(0.75));
    CHECK(w.contains(q));
}

TEST_CASE("toroidal distance takes the short way around") {
    const Window w = make_box(2, 0.0, 10.0, Metric::toroidal);
    Point a;
    a[0] = 0.5;
    a[1] = 0.0;
    Point b;
    b[0] = 9.5;
    b[1] = 0.0;
    CHECK(w.dist(a, b) == doctest::Approx(1.0));

    const Window e = make_box(2, 0.0, 10.0, Metric::euclidean);
    CHECK(e.dist(a, b) == doctest::Approx(9.0));
}

TEST_CASE("window json round trip") {
    const Window w = make_box(3, -2.0, 5.0, Metric::toroidal);
    nlohmann::json j = w;
    const Window back = j.get<Window>();
    CHECK(back == w);
}
