#include "ppx/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppx/errors.hpp"
#include "ppx/sampler.hpp"

namespace ppx {

void PathLoss::validate(int dim) const {
    if (a != 0 && a != 1) throw SpecError("path loss offset a must be 0 or 1");
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw SpecError("path loss scale b must be positive and finite");
    }
    if (!(delta > static_cast<double>(dim)) || !std::isfinite(delta)) {
        throw SpecError("path loss exponent must exceed the window dimension");
    }
    if (!(exclusion_radius > 0.0) || !std::isfinite(exclusion_radius)) {
        throw SpecError("exclusion radius must be positive and finite");
    }
}

double PathLoss::gain(double r) const {
    if (!(r >= 0.0)) throw SpecError("path gain needs a non-negative distance");
    if (a == 0 && r < exclusion_radius) {
        throw NumericError("singular path loss evaluated inside the exclusion radius");
    }
    return 1.0 / (static_cast<double>(a) + b * std::pow(r, delta));
}

void FadingModel::validate() const {
    signal.validate();
    interference.validate();
}

double FadingModel::sample_signal(Rng& rng) const {
    return signal.sample(Point{}, rng).front();
}

double FadingModel::sample_interference(Rng& rng) const {
    return interference.sample(Point{}, rng).front();
}

void NetworkConfig::validate() const {
    window.validate();
    bs_spec.validate(window.dim);
    ms_spec.validate(window.dim);
    pathloss.validate(window.dim);
    fading.validate();
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        throw SpecError("noise power must be non-negative and finite");
    }
}

RadiusModel RadiusModel::fixed_radius(double r) {
    RadiusModel m;
    m.kind = Kind::fixed;
    m.r = r;
    m.validate();
    return m;
}

RadiusModel RadiusModel::two_point_radius(double v0, double v1, double q) {
    RadiusModel m;
    m.kind = Kind::two_point;
    m.v0 = v0;
    m.v1 = v1;
    m.q = q;
    m.validate();
    return m;
}

RadiusModel RadiusModel::uniform_radius(double lo, double hi) {
    RadiusModel m;
    m.kind = Kind::uniform;
    m.lo = lo;
    m.hi = hi;
    m.validate();
    return m;
}

void RadiusModel::validate() const {
    switch (kind) {
        case Kind::fixed:
            if (!(r >= 0.0) || !std::isfinite(r)) {
                throw SpecError("fixed radius must be non-negative and finite");
            }
            return;
        case Kind::two_point:
            if (!(v0 >= 0.0) || !(v1 >= 0.0) || !std::isfinite(v0) ||
                !std::isfinite(v1)) {
                throw SpecError("two_point radii must be non-negative and finite");
            }
            if (q < 0.0 || q > 1.0) throw SpecError("two_point radius q in [0, 1]");
            return;
        case Kind::uniform:
            if (!(0.0 <= lo) || !(lo < hi) || !std::isfinite(hi)) {
                throw SpecError("uniform radius requires 0 <= lo < hi");
            }
            return;
    }
    throw SpecError("unreachable radius kind");
}

double RadiusModel::mean() const {
    switch (kind) {
        case Kind::fixed:
            return r;
        case Kind::two_point:
            return q * v0 + (1.0 - q) * v1;
        case Kind::uniform:
            return 0.5 * (lo + hi);
    }
    throw SpecError("unreachable radius kind");
}

double RadiusModel::sample(Rng& rng) const {
    switch (kind) {
        case Kind::fixed:
            return r;
        case Kind::two_point:
            return rng.bernoulli(q) ? v0 : v1;
        case Kind::uniform:
            return rng.uniform(lo, hi);
    }
    throw SpecError("unreachable radius kind");
}

std::string to_string(Footprint f) {
    switch (f) {
        case Footprint::ball:
            return "ball";
        case Footprint::square:
            return "square";
        case Footprint::ellipse:
            return "ellipse";
    }
    throw SpecError("unreachable footprint");
}

Footprint footprint_from_string(const std::string& name) {
    if (name == "ball") return Footprint::ball;
    if (name == "square") return Footprint::square;
    if (name == "ellipse") return Footprint::ellipse;
    throw SpecError("unknown footprint: " + name);
}

std::vector<std::size_t> associate_nearest(const PointPattern& users,
                                           const PointPattern& stations) {
    if (stations.points.empty()) {
        throw SpecError("association needs at least one station");
    }
    std::vector<std::size_t> serving(users.points.size(), 0);
    for (std::size_t j = 0; j < users.points.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < stations.points.size(); ++i) {
            const double d2 =
                stations.window.dist2(users.points[j], stations.points[i]);
            if (d2 < best) {
                best = d2;
                serving[j] = i;
            }
        }
    }
    return serving;
}

double interference_at(const Point& x, const PointPattern& stations,
                       std::size_t serving, const std::vector<double>& draws,
                       const PathLoss& pathloss) {
    if (serving >= stations.points.size()) {
        throw SpecError("serving index is out of range");
    }
    if (draws.size() != stations.points.size()) {
        throw SpecError("fading draws are not aligned with the stations");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < stations.points.size(); ++i) {
        if (i == serving) continue;
        total += draws[i] *
                 pathloss.gain(stations.window.dist(x, stations.points[i]));
    }
    return total;
}

double sinr(double fade, double serving_distance, double interference,
            double noise, const PathLoss& pathloss) {
    if (!(fade >= 0.0)) throw SpecError("fade must be non-negative");
    const double denom = noise + interference;
    if (!(denom > 0.0)) {
        throw NumericError("SINR denominator must be positive");
    }
    return fade * pathloss.gain(serving_distance) / denom;
}

std::vector<CoveragePoint> total_cell_coverage(
    const NetworkConfig& config, const std::vector<double>& thresholds,
    long long reps, std::uint64_t seed) {
    config.validate();
    if (thresholds.empty()) throw SpecError("coverage needs a threshold grid");
    for (double t : thresholds) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw SpecError("coverage thresholds must be positive and finite");
        }
    }
    if (config.fading.signal.kind != MarkSampler::Kind::exponential ||
        config.fading.signal.location_law) {
        throw SpecError(
            "joint cell coverage requires exponential signal fading");
    }
    const double mean_s = config.fading.signal.mean_value();
    const Point pinned = config.window.center();
    const std::size_t n_thresholds = thresholds.size();

    const std::vector<McEstimate> est = mc_mean_family(
        [&](std::uint64_t rep_seed, std::vector<double>& values) {
            const PointPattern extra = sample(
                config.bs_spec, config.window, mix_seed(rep_seed, stream::kNetwork));
            PointPattern stations;
            stations.window = config.window;
            stations.points.push_back(pinned);
            stations.points.insert(stations.points.end(), extra.points.begin(),
                                   extra.points.end());
            const PointPattern users = sample(
                config.ms_spec, config.window, mix_seed(rep_seed, stream::kUsers));
            const std::vector<std::size_t> serving =
                associate_nearest(users, stations);

            Rng interf_rng(mix_seed(rep_seed, stream::kFadingInterf));
            Rng signal_rng(mix_seed(rep_seed, stream::kFadingSignal));
            double min_margin = std::numeric_limits<double>::infinity();
            double weight = 0.0;  // sum over cell users of (noise + I) / g
            std::vector<double> draws(stations.points.size(), 0.0);
            for (std::size_t j = 0; j < users.points.size(); ++j) {
                if (serving[j] != 0) continue;
                for (std::size_t i = 1; i < stations.points.size(); ++i) {
                    draws[i] = config.fading.sample_interference(interf_rng);
                }
                const double interference = interference_at(
                    users.points[j], stations, 0, draws, config.pathloss);
                const double g0 = config.pathloss.gain(
                    config.window.dist(users.points[j], pinned));
                const double denom = config.noise + interference;
                if (!(denom > 0.0)) {
                    throw NumericError("SINR denominator must be positive");
                }
                weight += denom / g0;
                const double fade = config.fading.sample_signal(signal_rng);
                min_margin = std::min(min_margin, fade * g0 / denom);
            }
            for (std::size_t k = 0; k < n_thresholds; ++k) {
                values[k] = min_margin >= thresholds[k] ? 1.0 : 0.0;
                values[n_thresholds + k] =
                    std::exp(-thresholds[k] * weight / mean_s);
            }
        },
        2 * n_thresholds, reps, seed);

    std::vector<CoveragePoint> out(n_thresholds);
    for (std::size_t k = 0; k < n_thresholds; ++k) {
        out[k].threshold = thresholds[k];
        out[k].indicator = est[k];
        out[k].conditional = est[n_thresholds + k];
    }
    return out;
}

namespace {

bool footprint_covers(const Window& window, const Point& station,
                      const Point& probe, Footprint footprint,
                      const std::vector<double>& radii) {
    switch (footprint) {
        case Footprint::ball:
            return window.dist(station, probe) <= radii[0];
        case Footprint::square: {
            for (int axis = 0; axis < window.dim; ++axis) {
                if (window.axis_dist(station, probe, axis) > radii[0]) {
                    return false;
                }
            }
            return true;
        }
        case Footprint::ellipse: {
            double q = 0.0;
            for (int axis = 0; axis < window.dim; ++axis) {
                const double d = window.axis_dist(station, probe, axis);
                if (d == 0.0) continue;
                if (radii[static_cast<std::size_t>(axis)] <= 0.0) return false;
                const double t = d / radii[static_cast<std::size_t>(axis)];
                q += t * t;
            }
            return q <= 1.0;
        }
    }
    throw SpecError("unreachable footprint");
}

}  // namespace

SpatialCoverage spatial_coverage(const ProcessSpec& bs_spec,
                                 const Window& window,
                                 const RadiusModel& radius, Footprint footprint,
                                 const Point& probe,
                                 const std::vector<double>& t_grid,
                                 long long reps, std::uint64_t seed) {
    window.validate();
    bs_spec.validate(window.dim);
    radius.validate();
    if (t_grid.empty()) throw SpecError("spatial coverage needs a t grid");
    for (double t : t_grid) {
        if (!(t >= 0.0) || !(t <= 1.0)) {
            throw SpecError("pgf arguments must lie in [0, 1]");
        }
    }
    // Ellipses draw one semi-axis per dimension; other footprints one size.
    const std::size_t draws_per_station =
        footprint == Footprint::ellipse ? static_cast<std::size_t>(window.dim)
                                        : 1;

    const std::vector<McEstimate> est = mc_mean_family(
        [&](std::uint64_t rep_seed, std::vector<double>& values) {
            const PointPattern stations =
                sample(bs_spec, window, mix_seed(rep_seed, stream::kNetwork));
            Rng radius_rng(mix_seed(rep_seed, stream::kRadius));
            std::vector<double> radii(draws_per_station, 0.0);
            long long covering = 0;
            for (const Point& station : stations.points) {
                for (double& r : radii) r = radius.sample(radius_rng);
                if (footprint_covers(window, station, probe, footprint, radii)) {
                    ++covering;
                }
            }
            values[0] = covering >= 1 ? 1.0 : 0.0;
            for (std::size_t j = 0; j < t_grid.size(); ++j) {
                double power = 1.0;
                for (long long s = 0; s < covering; ++s) power *= t_grid[j];
                values[1 + j] = power;
            }
        },
        1 + t_grid.size(), reps, seed);

    SpatialCoverage out;
    out.p_covered = est[0];
    out.t_grid = t_grid;
    out.pgf.assign(est.begin() + 1, est.end());
    return out;
}

void to_json(nlohmann::json& j, const PathLoss& p) {
    j = {{"a", p.a},
         {"b", p.b},
         {"delta", p.delta},
         {"exclusion_radius", p.exclusion_radius}};
}

void from_json(const nlohmann::json& j, PathLoss& p) {
    p = PathLoss{};
    p.a = j.value("a", 1);
    p.b = j.value("b", 1.0);
    p.delta = j.value("delta", 4.0);
    p.exclusion_radius = j.value("exclusion_radius", 1e-6);
}

void to_json(nlohmann::json& j, const FadingModel& f) {
    j = {{"signal", f.signal}, {"interference", f.interference}};
}

void from_json(const nlohmann::json& j, FadingModel& f) {
    f = FadingModel{};
    if (j.contains("signal")) f.signal = j.at("signal").get<MarkSampler>();
    if (j.contains("interference")) {
        f.interference = j.at("interference").get<MarkSampler>();
    }
}

void to_json(nlohmann::json& j, const NetworkConfig& c) {
    j = {{"bs_spec", c.bs_spec},   {"ms_spec", c.ms_spec},
         {"window", c.window},     {"pathloss", c.pathloss},
         {"fading", c.fading},     {"noise", c.noise}};
}

void from_json(const nlohmann::json& j, NetworkConfig& c) {
    c = NetworkConfig{};
    if (j.contains("bs_spec")) c.bs_spec = j.at("bs_spec").get<ProcessSpec>();
    if (j.contains("ms_spec")) c.ms_spec = j.at("ms_spec").get<ProcessSpec>();
    if (j.contains("window")) c.window = j.at("window").get<Window>();
    if (j.contains("pathloss")) c.pathloss = j.at("pathloss").get<PathLoss>();
    if (j.contains("fading")) c.fading = j.at("fading").get<FadingModel>();
    c.noise = j.value("noise", 5e-5);
}

void to_json(nlohmann::json& j, const RadiusModel& r) {
    switch (r.kind) {
        case RadiusModel::Kind::fixed:
            j = {{"kind", "fixed"}, {"r", r.r}};
            break;
        case RadiusModel::Kind::two_point:
            j = {{"kind", "two_point"}, {"v0", r.v0}, {"v1", r.v1}, {"q", r.q}};
            break;
        case RadiusModel::Kind::uniform:
            j = {{"kind", "uniform"}, {"lo", r.lo}, {"hi", r.hi}};
            break;
    }
}

void from_json(const nlohmann::json& j, RadiusModel& r) {
    r = RadiusModel{};
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fixed") {
        r.kind = RadiusModel::Kind::fixed;
        r.r = j.at("r").get<double>();
    } else if (kind == "two_point") {
        r.kind = RadiusModel::Kind::two_point;
        r.v0 = j.at("v0").get<double>();
        r.v1 = j.at("v1").get<double>();
        r.q = j.at("q").get<double>();
    } else if (kind == "uniform") {
        r.kind = RadiusModel::Kind::uniform;
        r.lo = j.at("lo").get<double>();
        r.hi = j.at("hi").get<double>();
    } else {
        throw SpecError("unknown radius kind: " + kind);
    }
    r.validate();
}

}  // namespace ppx
