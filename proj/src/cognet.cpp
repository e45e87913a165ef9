#include "ppx/cognet.hpp"

#include <cmath>
#include <utility>

#include "ppx/errors.hpp"
#include "ppx/io.hpp"
#include "ppx/process_spec.hpp"
#include "ppx/test_function.hpp"

namespace ppx {

namespace {

SelectionScheme make_scheme(SelectionScheme::Kind kind, long long L, double mu) {
    SelectionScheme s;
    s.kind = kind;
    s.L = L;
    s.mu = mu;
    s.validate();
    return s;
}

bool is_integral(double v) { return v == std::floor(v); }

// FNV-1a over the identifying fields, so equal schemes hash equal.
std::uint64_t scheme_tag(const SelectionScheme& scheme) {
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix = [&h](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    const std::string name = scheme.name();
    mix(name.data(), name.size());
    mix(&scheme.L, sizeof(scheme.L));
    mix(&scheme.mu, sizeof(scheme.mu));
    return h;
}

}  // namespace

SelectionScheme SelectionScheme::bernoulli_scheme(long long L, double mu) {
    return make_scheme(Kind::bernoulli, L, mu);
}

SelectionScheme SelectionScheme::negative_binomial_scheme(long long L, double mu) {
    return make_scheme(Kind::negative_binomial, L, mu);
}

SelectionScheme SelectionScheme::poisson_scheme(long long L, double mu) {
    return make_scheme(Kind::poisson, L, mu);
}

SelectionScheme SelectionScheme::two_point_extreme_scheme(long long L, double mu) {
    return make_scheme(Kind::two_point_extreme, L, mu);
}

SelectionScheme SelectionScheme::fixed_scheme(long long L, double mu) {
    return make_scheme(Kind::fixed, L, mu);
}

void SelectionScheme::validate() const {
    if (L < 1) throw SpecError("selection pool L must be >= 1");
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw SpecError("selection mean must be non-negative and finite");
    }
    if (mu > static_cast<double>(L)) {
        throw SpecError("selection mean above the pool size is unsatisfiable");
    }
    switch (kind) {
        case Kind::bernoulli:
        case Kind::poisson:
            return;
        case Kind::negative_binomial:
            if (!(mu > 0.0)) {
                throw SpecError("negative_binomial selection needs mean > 0");
            }
            return;
        case Kind::two_point_extreme:
            if (!is_integral(2.0 * mu)) {
                throw SpecError("two_point_extreme needs 2*mu integral");
            }
            if (2.0 * mu > static_cast<double>(L)) {
                throw SpecError(
                    "two_point_extreme upper value above the pool size is "
                    "unsatisfiable");
            }
            return;
        case Kind::fixed:
            if (!is_integral(mu)) throw SpecError("fixed selection needs mu integral");
            return;
    }
    throw SpecError("unreachable selection kind");
}

std::string SelectionScheme::name() const {
    switch (kind) {
        case Kind::bernoulli:
            return "bernoulli";
        case Kind::negative_binomial:
            return "negative_binomial";
        case Kind::poisson:
            return "poisson";
        case Kind::two_point_extreme:
            return "two_point_extreme";
        case Kind::fixed:
            return "fixed";
    }
    throw SpecError("unreachable selection kind");
}

CountDistribution SelectionScheme::count() const {
    validate();
    switch (kind) {
        case Kind::bernoulli:
            return CountDistribution::binomial_count(L, mu / static_cast<double>(L));
        case Kind::negative_binomial:
            // p = 1/2 fixed; r = mu p / (1 - p) = mu keeps the mean exact.
            return CountDistribution::negative_binomial_count(mu, 0.5);
        case Kind::poisson:
            return CountDistribution::poisson_count(mu);
        case Kind::two_point_extreme:
            return CountDistribution::two_point_count(
                0, static_cast<long long>(std::llround(2.0 * mu)), 0.5);
        case Kind::fixed:
            return CountDistribution::fixed_count(
                static_cast<long long>(std::llround(mu)));
    }
    throw SpecError("unreachable selection kind");
}

void CognitiveConfig::validate() const {
    region.validate();
    pathloss.validate(region.dim);
    fading.validate();
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        throw SpecError("noise power must be non-negative and finite");
    }
    if (!(gamma_i > 0.0) || !std::isfinite(gamma_i)) {
        throw SpecError("interference budget must be positive and finite");
    }
}

Selection select(const SelectionScheme& scheme, const Window& window,
                 std::uint64_t seed) {
    scheme.validate();
    window.validate();
    const CountDistribution law = scheme.count();

    Selection out;
    out.pattern.window = window;
    out.pattern.seed = seed;
    out.pattern.spec_id = ProcessSpec::mixed_binomial_spec(law).id();

    // Same stream as the mixed-binomial sampler, so an untruncated draw
    // reproduces pointproc output exactly.
    Rng rng(mix_seed(seed, stream::kSampler));
    long long n = law.sample(rng);
    while (n > scheme.L) {
        ++out.redraws;
        n = law.sample(rng);
    }
    out.pattern.points.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        Point p;
        for (int axis = 0; axis < window.dim; ++axis) {
            p[axis] = rng.uniform(window.lower[axis], window.upper[axis]);
        }
        out.pattern.points.push_back(p);
    }
    return out;
}

double aggregate_interference(const PointPattern& sus, const Point& pu,
                              const FadingModel& fading,
                              const PathLoss& pathloss, std::uint64_t seed) {
    Rng rng(mix_seed(seed, stream::kFadingInterf));
    double total = 0.0;
    for (const Point& x : sus.points) {
        const double fade = fading.sample_interference(rng);
        total += fade * pathloss.gain(sus.window.dist(x, pu));
    }
    return total;
}

double sum_rate(const PointPattern& sus, const Point& bs, const Point& pu,
                const FadingModel& fading, const PathLoss& pathloss,
                double noise, std::uint64_t seed) {
    Rng signal_rng(mix_seed(seed, stream::kFadingSignal));
    Rng interf_rng(mix_seed(seed, stream::kFadingInterf));
    double total = 0.0;
    for (const Point& x : sus.points) {
        const double h_s = fading.sample_signal(signal_rng);
        const double h_i = fading.sample_interference(interf_rng);
        const double denom = noise + h_i * pathloss.gain(sus.window.dist(x, pu));
        if (!(denom > 0.0)) {
            throw NumericError("rate denominator must be positive");
        }
        total +=
            std::log(1.0 + h_s * pathloss.gain(sus.window.dist(x, bs)) / denom);
    }
    return total;
}

double mean_path_gain(const CognitiveConfig& config) {
    config.validate();
    if (config.region.metric != Metric::euclidean) {
        throw SpecError("mean path gain needs a euclidean region");
    }
    if (config.pathloss.a != 1) {
        throw SpecError("mean path gain needs the bounded path-loss form");
    }
    // Shift the region so the receiver sits at the origin of the radial
    // integrand, then reuse the path-loss-shaped quadrature mesh.
    Window shifted = config.region;
    for (int axis = 0; axis < shifted.dim; ++axis) {
        shifted.lower[axis] -= config.pu_location[axis];
        shifted.upper[axis] -= config.pu_location[axis];
    }
    const TestFunction g = TestFunction::pathloss(
        1.0, static_cast<double>(config.pathloss.a), config.pathloss.b,
        config.pathloss.delta);
    return integral_u(g, shifted) / config.region.volume();
}

double mean_interference_analytic(double mu, const CognitiveConfig& config) {
    if (!(mu >= 0.0)) throw SpecError("mean user count must be non-negative");
    return mu * mean_path_gain(config) *
           config.fading.interference.mean_value();
}

double max_mean_users(const CognitiveConfig& config) {
    const double per_user =
        mean_path_gain(config) * config.fading.interference.mean_value();
    if (!(per_user > 0.0)) {
        throw NumericError("per-user mean interference must be positive");
    }
    return config.gamma_i / per_user;
}

SchemeSummary scheme_summary(const SelectionScheme& scheme,
                             const CognitiveConfig& config, long long reps,
                             std::uint64_t seed) {
    scheme.validate();
    config.validate();
    const std::vector<McEstimate> est = mc_mean_family(
        [&](std::uint64_t rep_seed, std::vector<double>& values) {
            const Selection sel =
                select(scheme, config.region, mix_seed(rep_seed, stream::kSelection));
            values[0] = aggregate_interference(sel.pattern, config.pu_location,
                                               config.fading, config.pathloss,
                                               rep_seed);
            values[1] = sum_rate(sel.pattern, config.bs_location,
                                 config.pu_location, config.fading,
                                 config.pathloss, config.noise,
                                 mix_seed(rep_seed, stream::kNetwork));
            values[2] = static_cast<double>(sel.redraws);
        },
        3, reps, seed);

    SchemeSummary out;
    out.scheme = scheme.name();
    out.mean_interference = est[0];
    out.mean_rate = est[1];
    out.redraws_per_draw = est[2];
    out.analytic_interference = mean_interference_analytic(scheme.mu, config);
    return out;
}

SirStudy pu_sir_study(const std::vector<SelectionScheme>& schemes,
                      const CognitiveConfig& config,
                      const std::vector<double>& sir_grid, long long reps,
                      std::uint64_t seed) {
    if (schemes.empty()) throw SpecError("SIR study needs at least one scheme");
    config.validate();
    if (sir_grid.empty()) throw SpecError("SIR study needs a threshold grid");
    for (double g : sir_grid) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw SpecError("SIR thresholds must be positive and finite");
        }
    }
    if (config.fading.signal.kind != MarkSampler::Kind::exponential ||
        config.fading.signal.location_law) {
        throw SpecError("the SIR study requires an exponential primary fade");
    }
    const double mean_s = config.fading.signal.mean_value();
    const std::size_t n_grid = sir_grid.size();

    SirStudy study;
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const SelectionScheme& scheme = schemes[i];
        scheme.validate();
        // Seed by scheme identity, not list position: re-listing the same
        // scheme reuses the same stream, so a self-comparison is exactly
        // degenerate instead of two noisy copies.
        const std::uint64_t scheme_seed = mix_seed(seed, scheme_tag(scheme));
        const std::vector<McEstimate> est = mc_mean_family(
            [&](std::uint64_t rep_seed, std::vector<double>& values) {
                const Selection sel = select(
                    scheme, config.region, mix_seed(rep_seed, stream::kSelection));
                const double interference = aggregate_interference(
                    sel.pattern, config.pu_location, config.fading,
                    config.pathloss, rep_seed);
                Rng fade_rng(mix_seed(rep_seed, stream::kFadingSignal));
                const double fade = config.fading.sample_signal(fade_rng);
                for (std::size_t k = 0; k < n_grid; ++k) {
                    // P{h > g I | I} for the exponential fade.
                    values[k] = std::exp(-sir_grid[k] * interference / mean_s);
                    values[n_grid + k] =
                        fade > sir_grid[k] * interference ? 1.0 : 0.0;
                }
            },
            2 * n_grid, reps, scheme_seed);
        SirCurve curve;
        curve.scheme = scheme.name();
        curve.grid = sir_grid;
        curve.ccdf.assign(est.begin(), est.begin() + static_cast<long>(n_grid));
        curve.ccdf_raw.assign(est.begin() + static_cast<long>(n_grid), est.end());
        study.curves.push_back(std::move(curve));
    }

    std::vector<std::string> arguments;
    arguments.reserve(n_grid);
    for (double g : sir_grid) arguments.push_back("sir=" + fmt_g12(g));
    for (std::size_t i = 0; i + 1 < study.curves.size(); ++i) {
        study.pairwise.push_back(order_report_from_estimates(
            study.curves[i].scheme, study.curves[i + 1].scheme, arguments,
            study.curves[i].ccdf, study.curves[i + 1].ccdf));
    }
    return study;
}

std::vector<LfEstimate> interference_lt_mc(const SelectionScheme& scheme,
                                           const CognitiveConfig& config,
                                           const std::vector<double>& s_grid,
                                           long long reps, std::uint64_t seed) {
    scheme.validate();
    config.validate();
    if (s_grid.empty()) throw SpecError("transform grid must be non-empty");
    for (double s : s_grid) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw SpecError("transform arguments must be positive and finite");
        }
    }
    return exp_neg_sum_family(
        [&](std::uint64_t rep_seed, std::vector<double>& sums) {
            const Selection sel = select(
                scheme, config.region, mix_seed(rep_seed, stream::kSelection));
            const double interference = aggregate_interference(
                sel.pattern, config.pu_location, config.fading, config.pathloss,
                rep_seed);
            for (std::size_t k = 0; k < s_grid.size(); ++k) {
                sums[k] = s_grid[k] * interference;
            }
        },
        s_grid.size(), reps, seed);
}

void to_json(nlohmann::json& j, const SelectionScheme& s) {
    j = {{"kind", s.name()}, {"L", s.L}, {"mu", s.mu}};
}

void from_json(const nlohmann::json& j, SelectionScheme& s) {
    s = SelectionScheme{};
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "bernoulli") {
        s.kind = SelectionScheme::Kind::bernoulli;
    } else if (kind == "negative_binomial") {
        s.kind = SelectionScheme::Kind::negative_binomial;
    } else if (kind == "poisson") {
        s.kind = SelectionScheme::Kind::poisson;
    } else if (kind == "two_point_extreme") {
        s.kind = SelectionScheme::Kind::two_point_extreme;
    } else if (kind == "fixed") {
        s.kind = SelectionScheme::Kind::fixed;
    } else {
        throw SpecError("unknown selection kind: " + kind);
    }
    s.L = j.at("L").get<long long>();
    s.mu = j.at("mu").get<double>();
    s.validate();
}

namespace {

void point_to_json(nlohmann::json& j, const Point& p, int dim) {
    j = nlohmann::json::array();
    for (int axis = 0; axis < dim; ++axis) j.push_back(p[axis]);
}

Point point_from_json(const nlohmann::json& j) {
    Point p;
    if (j.size() > 3) throw SpecError("points have at most three coordinates");
    for (std::size_t axis = 0; axis < j.size(); ++axis) {
        p[axis] = j[axis].get<double>();
    }
    return p;
}

}  // namespace

void to_json(nlohmann::json& j, const CognitiveConfig& c) {
    nlohmann::json pu;
    nlohmann::json bs;
    point_to_json(pu, c.pu_location, c.region.dim);
    point_to_json(bs, c.bs_location, c.region.dim);
    j = {{"region", c.region},   {"pu_location", pu},
         {"bs_location", bs},    {"pathloss", c.pathloss},
         {"fading", c.fading},   {"noise", c.noise},
         {"gamma_i", c.gamma_i}};
}

void from_json(const nlohmann::json& j, CognitiveConfig& c) {
    c = CognitiveConfig{};
    if (j.contains("region")) c.region = j.at("region").get<Window>();
    if (j.contains("pu_location")) {
        c.pu_location = point_from_json(j.at("pu_location"));
    }
    if (j.contains("bs_location")) {
        c.bs_location = point_from_json(j.at("bs_location"));
    }
    if (j.contains("pathloss")) c.pathloss = j.at("pathloss").get<PathLoss>();
    if (j.contains("fading")) c.fading = j.at("fading").get<FadingModel>();
    c.noise = j.value("noise", 0.1);
    c.gamma_i = j.value("gamma_i", 1.0);
}

}  // namespace ppx
