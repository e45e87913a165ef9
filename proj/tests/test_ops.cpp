#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppx/errors.hpp"
#include "ppx/laplace.hpp"
#include "ppx/ops.hpp"
#include "ppx/sampler.hpp"

using namespace ppx;

namespace {

PointPattern fixed_pattern(const Window& w, std::vector<Point> points) {
    PointPattern p;
    p.window = w;
    p.points = std::move(points);
    p.spec_id = "manual";
    return p;
}

bool close_estimates(const LfEstimate& a, double exact, double z) {
    return std::abs(a.mean - exact) <= z * a.std_error + 1e-12;
}

}  // namespace

TEST_CASE("marks: distribution, determinism, validation") {
    const Window w = make_box(2, 0.0, 1.0);
    const auto base = sample(
        ProcessSpec::mixed_binomial_spec(CountDistribution::fixed_count(100)), w,
        11);
    REQUIRE(base.size() == 100);

    const auto marked = mark(base, MarkSampler::exponential_marks(2.0), 5);
    REQUIRE(marked.marks.size() == 100);
    CHECK(marked.base.points == base.points);
    double sum = 0.0;
    for (const auto& m : marked.marks) {
        REQUIRE(m.size() == 1);
        CHECK(m[0] >= 0.0);
        sum += m[0];
    }
    // Exponential(mean 2): se of the mean over 100 draws is 0.2.
    CHECK(std::abs(sum / 100.0 - 2.0) < 4.0 * 0.2);

    const auto again = mark(base, MarkSampler::exponential_marks(2.0), 5);
    CHECK(again.marks == marked.marks);
    const auto other = mark(base, MarkSampler::exponential_marks(2.0), 6);
    CHECK(other.marks != marked.marks);

    const auto fixed = mark(base, MarkSampler::fixed_marks(3.5), 1);
    for (const auto& m : fixed.marks) CHECK(m[0] == doctest::Approx(3.5));

    const auto empty = mark(fixed_pattern(w, {}), MarkSampler::uniform_marks(0, 1), 1);
    CHECK(empty.marks.empty());

    CHECK_THROWS_AS(MarkSampler::exponential_marks(-1.0).validate(), SpecError);
    CHECK_THROWS_AS(MarkSampler::uniform_marks(2.0, 1.0).validate(), SpecError);
    CHECK_THROWS_AS(MarkSampler::two_point_marks(0.0, 1.0, 1.5).validate(),
                    SpecError);
}

TEST_CASE("thinning keeps everything at p=1 and nothing at p=0") {
    const Window w = make_box(2, 0.0, 2.0);
    const auto base = sample(ProcessSpec::stationary_poisson_spec(3.0), w, 21);
    const auto all = thin(base, ThinningRule::constant(1.0), 3);
    CHECK(all.points == base.points);
    CHECK(all.spec_id.find("|thinned") != std::string::npos);
    const auto none = thin(base, ThinningRule::constant(0.0), 3);
    CHECK(none.size() == 0);
}

TEST_CASE("independent thinning of a poisson process is poisson") {
    // Retaining each point of a rate-2 process with p = 1/4 yields a rate-1/2
    // process; its Laplace functional has a closed form.
    const Window w = make_box(2, 0.0, 1.0);
    const auto spec = ProcessSpec::stationary_poisson_spec(2.0);
    const auto rule = ThinningRule::constant(0.25);
    const PatternGen gen = [=](std::uint64_t rep_seed) {
        return thin(sample(spec, w, rep_seed), rule, rep_seed);
    };
    const auto u = TestFunction::indicator(1.0);
    const auto estimate = lf_mc(gen, u, 20000, 97);
    const double exact = lf_ppp_analytic(0.5, u, w);
    INFO("mc ", estimate.mean, " +- ", estimate.std_error, " exact ", exact);
    CHECK(close_estimates(estimate, exact, 3.5));
}

TEST_CASE("radial thinning profile is sharp at its extremes") {
    const Window w = make_box(2, -3.0, 3.0);
    Point origin;
    Point far;
    far[0] = 2.0;
    far[1] = 2.0;
    const auto base = fixed_pattern(w, {origin, far});
    const auto rule = ThinningRule::radial(1.0, 0.0, 0.5);
    for (int seed = 0; seed < 32; ++seed) {
        const auto thinned = thin(base, rule, seed);
        REQUIRE(thinned.size() == 1);
        CHECK(thinned.points[0] == origin);
    }
}

TEST_CASE("random-field thinning retains the field-mean fraction") {
    const Window w = make_box(2, 0.0, 2.0);
    const auto spec = ProcessSpec::stationary_poisson_spec(2.0);
    const auto rule = ThinningRule::random_field({2, 2, 1}, 2.0, 2.0);
    const int seeds = 5000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const double n = static_cast<double>(
            thin(sample(spec, w, s), rule, s).size());
        sum += n;
        sum2 += n * n;
    }
    const double mean = sum / seeds;
    const double var = std::max(0.0, sum2 / seeds - mean * mean);
    const double se = std::sqrt(var / seeds);
    // Beta(2,2) retention has mean 1/2, so the thinned count has mean 4.
    CHECK(std::abs(mean - 4.0) <= 4.0 * se);
}

TEST_CASE("thinning rule validation") {
    CHECK_THROWS_AS(ThinningRule::constant(1.5).validate(), SpecError);
    CHECK_THROWS_AS(ThinningRule::constant(-0.1).validate(), SpecError);
    CHECK_THROWS_AS(ThinningRule::radial(0.5, 0.5, 0.0).validate(), SpecError);
    CHECK_THROWS_AS(ThinningRule::random_field({2, 2, 1}, 0.0, 1.0).validate(),
                    SpecError);
}

TEST_CASE("zero translation is the identity") {
    const Window w = make_box(2, 0.0, 2.0);
    const auto base = sample(ProcessSpec::stationary_poisson_spec(2.0), w, 31);
    const auto moved = translate(base, TranslationSampler::fixed({0, 0, 0}), 9);
    CHECK(moved.points == base.points);
    CHECK(moved.spec_id.find("|translated") != std::string::npos);
}

TEST_CASE("toroidal gaussian translation preserves the poisson law") {
    const Window w = make_box(2, 0.0, 2.0, Metric::toroidal);
    const auto spec = ProcessSpec::stationary_poisson_spec(1.5);
    const auto shift = TranslationSampler::gaussian_shift({0.3, 0.3});
    const PatternGen gen = [=](std::uint64_t rep_seed) {
        return translate(sample(spec, w, rep_seed), shift, rep_seed);
    };
    const auto u = TestFunction::exponential_decay(1.0, 1.0);
    const auto estimate = lf_mc(gen, u, 20000, 55);
    const double exact = lf_ppp_analytic(1.5, u, w);
    INFO("mc ", estimate.mean, " +- ", estimate.std_error, " exact ", exact);
    CHECK(close_estimates(estimate, exact, 3.5));
}

TEST_CASE("uniform cell translation of a lattice matches the perturbed lattice") {
    const Window w = make_box(2, 0.0, 4.0, Metric::toroidal);
    const auto lattice = ProcessSpec::lattice_spec(Matrix::identity(2));
    const auto shift =
        TranslationSampler::box_shift({-0.5, -0.5, 0}, {0.5, 0.5, 0});
    const PatternGen gen = [=](std::uint64_t rep_seed) {
        return translate(sample(lattice, w, rep_seed), shift, rep_seed);
    };
    const auto perturbed = ProcessSpec::perturbed_lattice_spec(
        Matrix::identity(2), CountDistribution::fixed_count(1));
    const auto u = TestFunction::exponential_decay(1.0, 1.0);
    const auto estimate = lf_mc(gen, u, 20000, 77);
    const double exact = lf_exact(perturbed, w, u);
    INFO("mc ", estimate.mean, " +- ", estimate.std_error, " exact ", exact);
    CHECK(close_estimates(estimate, exact, 3.5));
}

TEST_CASE("euclidean translation keeps emigrants and widens the window") {
    const Window w = make_box(2, 0.0, 1.0);
    Point near_edge;
    near_edge[0] = 0.9;
    near_edge[1] = 0.5;
    const auto base = fixed_pattern(w, {near_edge});
    const auto moved = translate(base, TranslationSampler::fixed({0.5, 0.0, 0}), 3);
    REQUIRE(moved.size() == 1);
    CHECK(moved.points[0][0] == doctest::Approx(1.4));
    CHECK(moved.window.contains(moved.points[0]));
    CHECK_NOTHROW(moved.validate());
    CHECK(moved.window.upper[0] > 1.4);
}

TEST_CASE("translation sampler validation") {
    CHECK_THROWS_AS(TranslationSampler::gaussian_shift({0.1}).validate(2),
                    SpecError);
    CHECK_THROWS_AS(TranslationSampler::gaussian_shift({-0.1, 0.1}).validate(2),
                    SpecError);
    CHECK_THROWS_AS(TranslationSampler::ball_shift(0.0).validate(2), SpecError);
    CHECK_THROWS_AS(
        TranslationSampler::box_shift({1, 0, 0}, {0, 1, 1}).validate(2),
        SpecError);
}

TEST_CASE("superposing independent poisson processes adds intensities") {
    const Window w = make_box(2, 0.0, 1.0);
    const auto spec1 = ProcessSpec::stationary_poisson_spec(1.0);
    const auto spec2 = ProcessSpec::stationary_poisson_spec(2.0);
    const PatternGen gen = [=](std::uint64_t rep_seed) {
        return superpose({sample(spec1, w, rep_seed),
                          sample(spec2, w, mix_seed(rep_seed, 0xABCD))});
    };
    const auto u = TestFunction::indicator(1.0);
    const auto estimate = lf_mc(gen, u, 20000, 13);
    const double exact = lf_ppp_analytic(3.0, u, w);
    INFO("mc ", estimate.mean, " +- ", estimate.std_error, " exact ", exact);
    CHECK(close_estimates(estimate, exact, 3.5));
}

TEST_CASE("superposition identities and counting") {
    const Window w = make_box(2, 0.0, 1.0);
    const auto base = sample(ProcessSpec::stationary_poisson_spec(3.0), w, 17);
    const auto empty = sample(ProcessSpec::stationary_poisson_spec(0.0), w, 18);
    const auto merged = superpose({base, empty});
    CHECK(merged.size() == base.size());

    const auto mb =
        ProcessSpec::mixed_binomial_spec(CountDistribution::fixed_count(2));
    const auto combined = superpose({sample(mb, w, 1), sample(mb, w, 2),
                                     sample(mb, w, 3)});
    CHECK(combined.size() == 6);
    CHECK_NOTHROW(combined.validate());
}

TEST_CASE("superposition rejects mismatched windows and collisions") {
    const Window w = make_box(2, 0.0, 1.0);
    const auto a = sample(ProcessSpec::stationary_poisson_spec(2.0), w, 5);
    const auto b = sample(ProcessSpec::stationary_poisson_spec(2.0),
                          make_box(2, 0.0, 2.0), 6);
    CHECK_THROWS_AS(superpose({a, b}), SpecError);
    CHECK_THROWS_AS(superpose({a, a}), SpecError);
}

TEST_CASE("operation rule json round trips") {
    {
        nlohmann::json j = MarkSampler::two_point_marks(0.5, 2.0, 0.25);
        const auto back = j.get<MarkSampler>();
        CHECK(back.v0 == doctest::Approx(0.5));
        CHECK(back.v1 == doctest::Approx(2.0));
        CHECK(back.q == doctest::Approx(0.25));
        CHECK(j["kind"] == "two_point");
    }
    {
        nlohmann::json j = ThinningRule::radial(0.9, 0.1, 2.0);
        const auto back = j.get<ThinningRule>();
        CHECK(back.kind == ThinningRule::Kind::p_location);
        CHECK(back.p_center == doctest::Approx(0.9));
        CHECK(back.p_edge == doctest::Approx(0.1));
        CHECK(back.radius == doctest::Approx(2.0));
    }
    {
        nlohmann::json j = TranslationSampler::gaussian_shift({0.1, 0.2});
        const auto back = j.get<TranslationSampler>();
        CHECK(back.kind == TranslationSampler::Kind::gaussian);
        REQUIRE(back.sigma.size() == 2);
        CHECK(back.sigma[1] == doctest::Approx(0.2));
    }
}
