#include "ppx/cognet.hpp"

#include <cmath>

#include "doctest.h"
#include "ppx/errors.hpp"
#include "ppx/parallel.hpp"
#include "ppx/sampler.hpp"

using namespace ppx;

namespace {

CognitiveConfig default_config() {
    CognitiveConfig c;
    c.validate();
    return c;
}

bool same_estimate(const McEstimate& a, const McEstimate& b) {
    return a.mean == b.mean && a.std_error == b.std_error &&
           a.replications == b.replications;
}

}  // namespace

TEST_CASE("selection schemes share the mean and differ in dispersion") {
    const long long L = 50;
    const double mu = 5.0;
    const auto schemes = {SelectionScheme::bernoulli_scheme(L, mu),
                          SelectionScheme::negative_binomial_scheme(L, mu),
                          SelectionScheme::poisson_scheme(L, mu),
                          SelectionScheme::two_point_extreme_scheme(L, mu),
                          SelectionScheme::fixed_scheme(L, mu)};
    for (const SelectionScheme& s : schemes) {
        CHECK(s.count().mean() == doctest::Approx(mu).epsilon(1e-12));
    }
    // pgf dominance chain at a spot value: extremes above NB above Poisson
    // above binomial above deterministic.
    const double t = 0.3;
    const double p_two = SelectionScheme::two_point_extreme_scheme(L, mu).count().pgf(t);
    const double p_nb = SelectionScheme::negative_binomial_scheme(L, mu).count().pgf(t);
    const double p_po = SelectionScheme::poisson_scheme(L, mu).count().pgf(t);
    const double p_be = SelectionScheme::bernoulli_scheme(L, mu).count().pgf(t);
    const double p_fx = SelectionScheme::fixed_scheme(L, mu).count().pgf(t);
    CHECK(p_two >= p_nb);
    CHECK(p_nb >= p_po);
    CHECK(p_po >= p_be);
    CHECK(p_be >= p_fx);
}

TEST_CASE("scheme validation rejects unsatisfiable means") {
    CHECK_THROWS_AS(SelectionScheme::bernoulli_scheme(10, 11.0), SpecError);
    CHECK_THROWS_AS(SelectionScheme::two_point_extreme_scheme(10, 6.0),
                    SpecError);  // needs 2 mu <= L
    CHECK_THROWS_AS(SelectionScheme::two_point_extreme_scheme(50, 2.3),
                    SpecError);  // 2 mu must be integral
    CHECK_THROWS_AS(SelectionScheme::fixed_scheme(50, 2.5), SpecError);
    CHECK_THROWS_AS(SelectionScheme::negative_binomial_scheme(50, 0.0), SpecError);
    CHECK_THROWS_AS(SelectionScheme::bernoulli_scheme(0, 0.0), SpecError);
}

TEST_CASE("fixed selection always activates exactly mu users") {
    const SelectionScheme scheme = SelectionScheme::fixed_scheme(50, 5.0);
    const Window window = make_box(2, -5.0, 5.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Selection sel = select(scheme, window, seed);
        CHECK(sel.pattern.points.size() == 5);
        CHECK(sel.redraws == 0);
    }
}

TEST_CASE("selection matches the mixed-binomial sampler when nothing truncates") {
    // Poisson(5) essentially never exceeds a pool of 50, so the rejection
    // loop is inert and the draw must agree with the generic sampler bitwise.
    const SelectionScheme scheme = SelectionScheme::poisson_scheme(50, 5.0);
    const ProcessSpec spec =
        ProcessSpec::mixed_binomial_spec(CountDistribution::poisson_count(5.0));
    const Window window = make_box(2, -5.0, 5.0);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Selection sel = select(scheme, window, seed);
        const PointPattern direct = sample(spec, window, seed);
        REQUIRE(sel.redraws == 0);
        REQUIRE(sel.pattern.points.size() == direct.points.size());
        for (std::size_t i = 0; i < direct.points.size(); ++i) {
            CHECK(sel.pattern.points[i] == direct.points[i]);
        }
    }
}

TEST_CASE("selection counts hit the advertised law") {
    const Window window = make_box(2, -5.0, 5.0);
    const int n = 10000;

    // bernoulli: mean 5, var L p (1-p) = 4.5.
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += static_cast<double>(
            select(SelectionScheme::bernoulli_scheme(50, 5.0), window,
                   static_cast<std::uint64_t>(i))
                .pattern.points.size());
    }
    CHECK(std::fabs(sum / n - 5.0) < 4.0 * std::sqrt(4.5) / std::sqrt(n));

    // two_point_extreme: all-or-nothing, each arm about half the time.
    int zeros = 0;
    int tens = 0;
    for (int i = 0; i < n; ++i) {
        const auto count =
            select(SelectionScheme::two_point_extreme_scheme(50, 5.0), window,
                   static_cast<std::uint64_t>(i))
                .pattern.points.size();
        if (count == 0) ++zeros;
        if (count == 10) ++tens;
    }
    CHECK(zeros + tens == n);
    CHECK(std::fabs(zeros / static_cast<double>(n) - 0.5) <
          4.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("truncation caps the count and reports redraws") {
    // NB(mu = 1.5) on a pool of 3 truncates often enough to observe.
    const SelectionScheme scheme = SelectionScheme::negative_binomial_scheme(3, 1.5);
    const Window window = make_box(2, 0.0, 1.0);
    long long redraws = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const Selection sel = select(scheme, window, seed);
        CHECK(sel.pattern.points.size() <= 3);
        redraws += sel.redraws;
    }
    CHECK(redraws > 0);
}

TEST_CASE("aggregate interference closed forms") {
    const CognitiveConfig config = default_config();
    PointPattern none;
    none.window = config.region;
    CHECK(aggregate_interference(none, config.pu_location, config.fading,
                                 config.pathloss, 1) == 0.0);

    // One user at distance 1 with a pinned unit fade: I = g(1) = 1/2.
    FadingModel pinned;
    pinned.interference = MarkSampler::fixed_marks(1.0);
    PointPattern one;
    one.window = config.region;
    one.points = {Point{{1.0, 0.0}}};
    CHECK(aggregate_interference(one, config.pu_location, pinned,
                                 config.pathloss, 1) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("sum rate closed form") {
    const CognitiveConfig config = default_config();
    PointPattern none;
    none.window = config.region;
    CHECK(sum_rate(none, config.bs_location, config.pu_location, config.fading,
                   config.pathloss, config.noise, 1) == 0.0);

    // One user at (1,0): gain 1/2 to a station at the origin and gain 1 to a
    // primary at its own location.  Pinned fades make the rate exactly
    // log(1 + (e-1)) = 1.
    FadingModel pinned;
    pinned.signal = MarkSampler::fixed_marks(2.0 * (std::exp(1.0) - 1.0));
    pinned.interference = MarkSampler::fixed_marks(0.5);
    PointPattern one;
    one.window = config.region;
    one.points = {Point{{1.0, 0.0}}};
    const double rate = sum_rate(one, Point{{0.0, 0.0}}, Point{{1.0, 0.0}},
                                 pinned, config.pathloss, 0.5, 1);
    CHECK(rate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean path gain matches an independent quadrature value") {
    // (1/100) int over [-5,5]^2 of 1/(1 + r^4) around a centred receiver.
    const CognitiveConfig config = default_config();
    CHECK(mean_path_gain(config) ==
          doctest::Approx(0.048320108155605605).epsilon(1e-9));

    CognitiveConfig torus = config;
    torus.region = make_box(2, -5.0, 5.0, Metric::toroidal);
    CHECK_THROWS_AS(mean_path_gain(torus), SpecError);
    CognitiveConfig singular = config;
    singular.pathloss.a = 0;
    CHECK_THROWS_AS(mean_path_gain(singular), SpecError);
}

TEST_CASE("admissible mean user count saturates the interference budget") {
    const CognitiveConfig config = default_config();
    const double cap = max_mean_users(config);
    CHECK(cap == doctest::Approx(20.695317915673794).epsilon(1e-9));
    CHECK(mean_interference_analytic(cap, config) ==
          doctest::Approx(config.gamma_i).epsilon(1e-12));
    // Halving the budget halves the cap.
    CognitiveConfig tight = config;
    tight.gamma_i = 0.5;
    CHECK(max_mean_users(tight) == doctest::Approx(0.5 * cap).epsilon(1e-12));
}

TEST_CASE("scheme summaries agree with the analytic mean interference") {
    const CognitiveConfig config = default_config();
    const long long reps = 10000;
    const auto schemes = {SelectionScheme::bernoulli_scheme(50, 5.0),
                          SelectionScheme::negative_binomial_scheme(50, 5.0),
                          SelectionScheme::poisson_scheme(50, 5.0),
                          SelectionScheme::two_point_extreme_scheme(50, 5.0),
                          SelectionScheme::fixed_scheme(50, 5.0)};
    std::vector<SchemeSummary> summaries;
    std::uint64_t seed = 7000;
    for (const SelectionScheme& s : schemes) {
        summaries.push_back(scheme_summary(s, config, reps, seed++));
    }
    const double analytic = 5.0 * 0.048320108155605605;
    for (const SchemeSummary& s : summaries) {
        CHECK(s.analytic_interference == doctest::Approx(analytic).epsilon(1e-9));
        CHECK(std::fabs(s.mean_interference.mean - analytic) <
              4.0 * s.mean_interference.std_error);
        CHECK(s.redraws_per_draw.mean == 0.0);  // mu = 5 never hits L = 50
    }
    // The mean rate is blind to the dispersion of the count: every scheme
    // shares it, within Monte Carlo error.
    for (std::size_t i = 1; i < summaries.size(); ++i) {
        const auto& a = summaries[0].mean_rate;
        const auto& b = summaries[i].mean_rate;
        const double se = std::sqrt(a.std_error * a.std_error +
                                    b.std_error * b.std_error);
        CHECK(std::fabs(a.mean - b.mean) < 4.0 * se);
    }
}

TEST_CASE("interference transform separates dispersed from concentrated counts") {
    const CognitiveConfig config = default_config();
    const SelectionScheme nb = SelectionScheme::negative_binomial_scheme(50, 5.0);
    const SelectionScheme be = SelectionScheme::bernoulli_scheme(50, 5.0);
    const std::vector<double> s_grid = {10.0, 100.0};
    const long long reps = 20000;
    const auto lt_nb = interference_lt_mc(nb, config, s_grid, reps, 31);
    const auto lt_be = interference_lt_mc(be, config, s_grid, reps, 32);
    // Independently computed transform values E[exp(-s I)].
    const double exact_nb[2] = {0.5226823055660422, 0.19134086932607308};
    const double exact_be[2] = {0.4977794152692274, 0.13541145286453624};
    std::vector<McEstimate> lhs, rhs;
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        CHECK(std::fabs(lt_nb[k].mean - exact_nb[k]) < 4.0 * lt_nb[k].std_error);
        CHECK(std::fabs(lt_be[k].mean - exact_be[k]) < 4.0 * lt_be[k].std_error);
        lhs.push_back(McEstimate{lt_nb[k].mean, lt_nb[k].std_error,
                                 lt_nb[k].replications});
        rhs.push_back(McEstimate{lt_be[k].mean, lt_be[k].std_error,
                                 lt_be[k].replications});
    }
    const OrderReport report = order_report_from_estimates(
        "negative_binomial", "bernoulli", {"s=10", "s=100"}, lhs, rhs);
    CHECK(report.overall == OverallVerdict::ordered);
}

TEST_CASE("primary SIR curves match the count-transform closed form") {
    const CognitiveConfig config = default_config();
    const std::vector<SelectionScheme> schemes = {
        SelectionScheme::negative_binomial_scheme(50, 5.0),
        SelectionScheme::bernoulli_scheme(50, 5.0)};
    const std::vector<double> grid = {10.0, 100.0};
    const long long reps = 20000;
    const SirStudy study = pu_sir_study(schemes, config, grid, reps, 5150);
    REQUIRE(study.curves.size() == 2);
    REQUIRE(study.pairwise.size() == 1);

    const double exact_nb[2] = {0.5226823055660422, 0.19134086932607308};
    const double exact_be[2] = {0.4977794152692274, 0.13541145286453624};
    for (int k = 0; k < 2; ++k) {
        const auto& nb = study.curves[0];
        const auto& be = study.curves[1];
        CHECK(std::fabs(nb.ccdf[k].mean - exact_nb[k]) < 4.0 * nb.ccdf[k].std_error);
        CHECK(std::fabs(be.ccdf[k].mean - exact_be[k]) < 4.0 * be.ccdf[k].std_error);
        // The sampled-fade indicator estimates the same curve, more noisily.
        CHECK(std::fabs(nb.ccdf_raw[k].mean - exact_nb[k]) <
              5.0 * nb.ccdf_raw[k].std_error);
        CHECK(nb.ccdf[k].std_error < nb.ccdf_raw[k].std_error);
    }
    // More dispersed counts keep the primary's SIR tail heavier throughout.
    CHECK(study.pairwise[0].overall == OverallVerdict::ordered);
}

TEST_CASE("a scheme compared with itself is exactly degenerate") {
    const CognitiveConfig config = default_config();
    const std::vector<SelectionScheme> twice = {
        SelectionScheme::poisson_scheme(50, 5.0),
        SelectionScheme::poisson_scheme(50, 5.0)};
    const SirStudy study = pu_sir_study(twice, config, {1.0, 10.0}, 500, 77);
    REQUIRE(study.curves.size() == 2);
    for (std::size_t k = 0; k < study.curves[0].ccdf.size(); ++k) {
        CHECK(same_estimate(study.curves[0].ccdf[k], study.curves[1].ccdf[k]));
    }
    CHECK(study.pairwise[0].overall == OverallVerdict::ordered_degenerate);
}

TEST_CASE("the SIR study validates its inputs") {
    const CognitiveConfig config = default_config();
    const std::vector<SelectionScheme> schemes = {
        SelectionScheme::poisson_scheme(50, 5.0)};
    CHECK_THROWS_AS(pu_sir_study(schemes, config, {}, 100, 1), SpecError);
    CHECK_THROWS_AS(pu_sir_study(schemes, config, {0.0}, 100, 1), SpecError);
    CognitiveConfig pinned = config;
    pinned.fading.signal = MarkSampler::fixed_marks(1.0);
    CHECK_THROWS_AS(pu_sir_study(schemes, pinned, {1.0}, 100, 1), SpecError);
}

TEST_CASE("the SIR study is thread-count invariant") {
    const CognitiveConfig config = default_config();
    const std::vector<SelectionScheme> schemes = {
        SelectionScheme::poisson_scheme(50, 5.0),
        SelectionScheme::fixed_scheme(50, 5.0)};
    set_thread_count(1);
    const SirStudy one = pu_sir_study(schemes, config, {1.0, 10.0}, 400, 9);
    set_thread_count(3);
    const SirStudy three = pu_sir_study(schemes, config, {1.0, 10.0}, 400, 9);
    set_thread_count(1);
    for (std::size_t c = 0; c < one.curves.size(); ++c) {
        for (std::size_t k = 0; k < one.curves[c].ccdf.size(); ++k) {
            CHECK(same_estimate(one.curves[c].ccdf[k], three.curves[c].ccdf[k]));
            CHECK(same_estimate(one.curves[c].ccdf_raw[k],
                                three.curves[c].ccdf_raw[k]));
        }
    }
}

TEST_CASE("cognitive config and schemes round-trip through JSON") {
    CognitiveConfig config;
    config.pu_location = Point{{0.5, -0.5}};
    config.bs_location = Point{{1.0, 2.0}};
    config.noise = 0.25;
    config.gamma_i = 2.0;
    config.pathloss.delta = 3.0;
    nlohmann::json j = config;
    const CognitiveConfig back = j.get<CognitiveConfig>();
    CHECK(back.pu_location == config.pu_location);
    CHECK(back.bs_location == config.bs_location);
    CHECK(back.noise == config.noise);
    CHECK(back.gamma_i == config.gamma_i);
    CHECK(back.pathloss.delta == config.pathloss.delta);
    CHECK(back.region == config.region);

    for (const SelectionScheme& s :
         {SelectionScheme::bernoulli_scheme(40, 4.0),
          SelectionScheme::negative_binomial_scheme(50, 5.0),
          SelectionScheme::two_point_extreme_scheme(50, 5.0)}) {
        nlohmann::json sj = s;
        const SelectionScheme sback = sj.get<SelectionScheme>();
        CHECK(sback.kind == s.kind);
        CHECK(sback.L == s.L);
        CHECK(sback.mu == s.mu);
        CHECK(sback.name() == s.name());
    }
}
