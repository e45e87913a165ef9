#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "ppx/errors.hpp"
#include "ppx/sampler.hpp"

using namespace ppx;

namespace {

std::set<std::pair<long long, long long>> as_integer_set(
    const std::vector<Point>& points) {
    std::set<std::pair<long long, long long>> out;
    for (const Point& p : points) {
        out.insert({std::llround(p[0]), std::llround(p[1])});
    }
    return out;
}

// Empirical mean count over seeds, compared against the exact expectation
// within 4 standard errors.
void check_mean_count(const ProcessSpec& spec, const Window& window,
                      int seeds) {
    const double expected = intensity_measure(spec, window);
    double sum = 0.0;
    double sum2 = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const double n = static_cast<double>(sample(spec, window, s).size());
        sum += n;
        sum2 += n * n;
    }
    const double mean = sum / seeds;
    const double var = std::max(0.0, sum2 / seeds - mean * mean);
    const double se = std::sqrt(var / seeds);
    INFO("spec ", spec.id(), " mean ", mean, " expected ", expected, " se ", se);
    CHECK(std::abs(mean - expected) <= 4.0 * se + 1e-9);
}

}  // namespace

TEST_CASE("unit lattice points on [0,3]^2") {
    const Window w = make_box(2, 0.0, 3.0);
    const auto points = lattice_points(Matrix::identity(2), w);
    const auto got = as_integer_set(points);
    std::set<std::pair<long long, long long>> want;
    for (long long i = 0; i <= 3; ++i) {
        for (long long j = 0; j <= 3; ++j) want.insert({i, j});
    }
    CHECK(got == want);
}

TEST_CASE("spacing-2 lattice points on [0,4]^2") {
    const Window w = make_box(2, 0.0, 4.0);
    const auto points = lattice_points(Matrix::scaled_identity(2, 2.0), w);
    const auto got = as_integer_set(points);
    std::set<std::pair<long long, long long>> want;
    for (long long i = 0; i <= 4; i += 2) {
        for (long long j = 0; j <= 4; j += 2) want.insert({i, j});
    }
    CHECK(got == want);
}

TEST_CASE("small window keeps the origin site") {
    const Window w = make_box(2, 0.0, 0.5);
    const auto points = lattice_points(Matrix::identity(2), w);
    CHECK(as_integer_set(points).count({0, 0}) == 1);
}

TEST_CASE("toroidal lattice enumeration covers one period") {
    const Window w = make_box(2, 0.0, 10.0, Metric::toroidal);
    const auto points = lattice_points(Matrix::identity(2), w);
    CHECK(points.size() == 100);
    for (const Point& p : points) CHECK(w.contains(p));

    CHECK_THROWS_AS(lattice_points(Matrix::scaled_identity(2, 0.7), w),
                    SpecError);
    Matrix sheared = Matrix::identity(2);
    sheared.at(0, 1) = 0.5;
    CHECK_THROWS_AS(lattice_points(sheared, w), SpecError);

    Matrix singular;
    singular.dim = 2;
    singular.a = {1, 2, 0, 2, 4, 0, 0, 0, 1};
    CHECK_THROWS_AS(lattice_points(singular, make_box(2, 0.0, 1.0)), SpecError);
}

TEST_CASE("intensity measure closed forms") {
    CHECK(intensity_measure(ProcessSpec::stationary_poisson_spec(0.1),
                            make_box(2, 0.0, 50.0)) == doctest::Approx(250.0));
    CHECK(intensity_measure(
              ProcessSpec::mixed_binomial_spec(
                  CountDistribution::poisson_count(5.0)),
              make_box(2, 0.0, 1.0)) == doctest::Approx(5.0));
    // Mean mixing value 1 on a window of area 10.
    Window rect = make_box(2, 0.0, 1.0);
    rect.upper[0] = 5.0;
    rect.upper[1] = 2.0;
    CHECK(intensity_measure(
              ProcessSpec::mixed_poisson_spec({{0.5, 0.5}, {1.5, 0.5}}), rect) ==
          doctest::Approx(10.0));
    // Lattice counts points inside the half-open window.
    CHECK(intensity_measure(ProcessSpec::lattice_spec(Matrix::identity(2)),
                            make_box(2, 0.0, 3.0)) == doctest::Approx(9.0));
    CHECK(intensity_measure(ProcessSpec::lattice_spec(Matrix::identity(2)),
                            make_box(2, 0.0, 10.0, Metric::toroidal)) ==
          doctest::Approx(100.0));
}

TEST_CASE("zero intensity gives an empty pattern") {
    const auto pattern = sample(ProcessSpec::stationary_poisson_spec(0.0),
                                make_box(2, 0.0, 7.0), 123);
    CHECK(pattern.size() == 0);
}

TEST_CASE("poisson mean count matches its intensity measure tightly") {
    // 10^4 seeds at expected count 250: the mean must land within
    // 3 sigma / 100 of 250.
    const auto spec = ProcessSpec::stationary_poisson_spec(0.1);
    const Window w = make_box(2, 0.0, 50.0);
    const int seeds = 10000;
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
        sum += static_cast<double>(sample(spec, w, s).size());
    }
    const double mean = sum / seeds;
    CHECK(std::abs(mean - 250.0) <= 3.0 * std::sqrt(250.0) / 100.0);
}

TEST_CASE("mean counts match intensity measures for every class") {
    const Window box = make_box(2, 0.0, 2.0);
    const Window torus = make_box(2, 0.0, 2.0, Metric::toroidal);
    const int seeds = 10000;

    check_mean_count(ProcessSpec::stationary_poisson_spec(1.5), box, seeds);
    check_mean_count(ProcessSpec::mixed_poisson_spec({{0.5, 0.5}, {1.5, 0.5}}),
                     box, seeds);
    check_mean_count(
        ProcessSpec::cox_grid_spec({2, 2, 1}, IntensityLaw::gamma_law(2.0, 0.5)),
        box, seeds);
    check_mean_count(
        ProcessSpec::cluster_spec(
            ProcessSpec::stationary_poisson_spec(0.5),
            ClusterSpec{CountDistribution::fixed_count(3),
                        ClusterSpec::Offset::uniform_ball, 0.3, {1.0}}),
        box, seeds);
    check_mean_count(
        ProcessSpec::cluster_spec(
            ProcessSpec::stationary_poisson_spec(0.5),
            ClusterSpec{CountDistribution::poisson_count(2.0),
                        ClusterSpec::Offset::gaussian, 1.0, {0.2, 0.2}}),
        box, seeds);
    check_mean_count(
        ProcessSpec::perturbed_lattice_spec(Matrix::identity(2),
                                            CountDistribution::poisson_count(1.0)),
        torus, seeds);
    check_mean_count(ProcessSpec::mixed_binomial_spec(
                         CountDistribution::binomial_count(10, 0.5)),
                     box, seeds);
}

TEST_CASE("unit-replica perturbed lattice fills each cell exactly once") {
    const auto spec = ProcessSpec::perturbed_lattice_spec(
        Matrix::identity(2), CountDistribution::fixed_count(1));
    const Window w = make_box(2, 0.0, 10.0, Metric::toroidal);
    const auto pattern = sample(spec, w, 42);
    REQUIRE(pattern.size() == 100);
    pattern.validate();

    std::map<std::pair<long long, long long>, int> per_cell;
    for (const Point& p : pattern.points) {
        // Nearest lattice site of the wrapped point, reduced mod 10.
        long long i = std::llround(p[0]);
        long long j = std::llround(p[1]);
        per_cell[{((i % 10) + 10) % 10, ((j % 10) + 10) % 10}] += 1;
    }
    CHECK(per_cell.size() == 100);
    for (const auto& [cell, count] : per_cell) CHECK(count == 1);
}

TEST_CASE("mixed binomial points are uniform over the window") {
    const auto spec =
        ProcessSpec::mixed_binomial_spec(CountDistribution::poisson_count(1.0));
    const Window w = make_box(2, 0.0, 2.0);
    const int seeds = 100000;
    std::array<long long, 16> bins{};
    long long total = 0;
    for (int s = 0; s < seeds; ++s) {
        const auto pattern = sample(spec, w, s);
        if (pattern.size() == 0) continue;
        const Point& p = pattern.points.front();
        const int i = std::min(3, static_cast<int>(p[0] / 0.5));
        const int j = std::min(3, static_cast<int>(p[1] / 0.5));
        bins[4 * i + j] += 1;
        total += 1;
    }
    REQUIRE(total > 50000);
    const double expected = static_cast<double>(total) / 16.0;
    double stat = 0.0;
    for (long long b : bins) {
        const double d = static_cast<double>(b) - expected;
        stat += d * d / expected;
    }
    // Chi-square critical value, 15 degrees of freedom, p = 0.001.
    CHECK(stat < 37.697298);
}

TEST_CASE("sampling is deterministic in (spec, window, seed)") {
    const auto spec = ProcessSpec::cluster_spec(
        ProcessSpec::stationary_poisson_spec(0.5),
        ClusterSpec{CountDistribution::poisson_count(2.0),
                    ClusterSpec::Offset::uniform_ball, 0.3, {1.0}});
    const Window w = make_box(2, 0.0, 3.0);
    const auto a = sample(spec, w, 2024);
    const auto b = sample(spec, w, 2024);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.points[i] == b.points[i]);
    CHECK(a.spec_id == spec.id());
    CHECK(a.seed == 2024);

    const auto c = sample(spec, w, 2025);
    CHECK((c.size() != a.size() || !(c.points == a.points)));
}

TEST_CASE("patterns satisfy containment and simplicity for every class") {
    const Window box = make_box(2, 0.0, 2.0);
    const Window torus = make_box(2, 0.0, 2.0, Metric::toroidal);
    const std::vector<std::pair<ProcessSpec, Window>> cases = {
        {ProcessSpec::stationary_poisson_spec(2.0), box},
        {ProcessSpec::mixed_poisson_spec({{0.5, 0.5}, {1.5, 0.5}}), box},
        {ProcessSpec::cox_grid_spec({2, 2, 1}, IntensityLaw::uniform_law(0.0, 2.0)),
         box},
        {ProcessSpec::cluster_spec(
             ProcessSpec::stationary_poisson_spec(0.5),
             ClusterSpec{CountDistribution::fixed_count(3),
                         ClusterSpec::Offset::uniform_ball, 0.3, {1.0}}),
         box},
        {ProcessSpec::perturbed_lattice_spec(Matrix::identity(2),
                                             CountDistribution::poisson_count(1.0)),
         torus},
        {ProcessSpec::mixed_binomial_spec(CountDistribution::fixed_count(7)), box},
        {ProcessSpec::lattice_spec(Matrix::scaled_identity(2, 0.5)), torus},
    };
    for (const auto& [spec, window] : cases) {
        for (int seed = 0; seed < 50; ++seed) {
            CHECK_NOTHROW(sample(spec, window, seed).validate());
        }
    }
}

TEST_CASE("oversized expectations are rejected before allocation") {
    CHECK_THROWS_AS(sample(ProcessSpec::stationary_poisson_spec(1e9),
                           make_box(2, 0.0, 1.0), 1),
                    NumericError);
    SamplerOptions tight;
    tight.max_expected_count = 10.0;
    CHECK_THROWS_AS(sample(ProcessSpec::stationary_poisson_spec(100.0),
                           make_box(2, 0.0, 1.0), 1, tight),
                    NumericError);
}
