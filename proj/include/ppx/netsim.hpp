#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppx/geometry.hpp"
#include "ppx/laplace.hpp"
#include "ppx/ops.hpp"
#include "ppx/pattern.hpp"
#include "ppx/process_spec.hpp"
#include "ppx/rng.hpp"

namespace ppx {

// Distance-power attenuation g(r) = (a + b r^delta)^{-1}.  With a = 1 the
// gain is bounded by 1; with a = 0 it diverges at the origin, so distances
// inside exclusion_radius are rejected as a modeling error.
struct PathLoss {
    int a = 1;
    double b = 1.0;
    double delta = 4.0;
    double exclusion_radius = 1e-6;

    // dim bounds the admissible exponents: delta > dim keeps far-field
    // interference integrable.
    void validate(int dim) const;
    double gain(double r) const;
};

// Per-link power laws: the serving link and the interfering links may fade
// differently.  Both default to unit-mean exponential.
struct FadingModel {
    MarkSampler signal = MarkSampler::exponential_marks(1.0);
    MarkSampler interference = MarkSampler::exponential_marks(1.0);

    void validate() const;
    double sample_signal(Rng& rng) const;
    double sample_interference(Rng& rng) const;
};

// Downlink scenario: base stations and users over one window.
struct NetworkConfig {
    ProcessSpec bs_spec = ProcessSpec::stationary_poisson_spec(0.1);
    ProcessSpec ms_spec = ProcessSpec::stationary_poisson_spec(1.0);
    Window window = make_box(2, -10.0, 10.0, Metric::toroidal);
    PathLoss pathloss;
    FadingModel fading;
    double noise = 5e-5;

    void validate() const;
};

// Random cell footprint size for the sensing-region model.
struct RadiusModel {
    enum class Kind { fixed, two_point, uniform };

    Kind kind = Kind::fixed;
    double r = 1.0;            // fixed
    double v0 = 1.0;           // two_point, P{v0} = q
    double v1 = 1.0;
    double q = 0.5;
    double lo = 0.5;           // uniform
    double hi = 1.5;

    static RadiusModel fixed_radius(double r);
    static RadiusModel two_point_radius(double v0, double v1, double q);
    static RadiusModel uniform_radius(double lo, double hi);

    void validate() const;
    double mean() const;
    double sample(Rng& rng) const;
};

enum class Footprint { ball, square, ellipse };

std::string to_string(Footprint f);
Footprint footprint_from_string(const std::string& name);

// Index of the nearest station under the station window's metric for every
// user; ties break to the lowest index.  Throws SpecError when there are no
// stations.
std::vector<std::size_t> associate_nearest(const PointPattern& users,
                                           const PointPattern& stations);

// Sum of fading-weighted gains from every non-serving station to x.  The
// draws vector is aligned with the stations by index; the serving slot is
// ignored.
double interference_at(const Point& x, const PointPattern& stations,
                       std::size_t serving, const std::vector<double>& draws,
                       const PathLoss& pathloss);

// h g(r) / (noise + interference).
double sinr(double fade, double serving_distance, double interference,
            double noise, const PathLoss& pathloss);

struct CoveragePoint {
    double threshold = 1.0;  // linear SINR threshold
    // P{every user of the tagged cell meets the threshold}, two estimators
    // from the same realizations: the raw indicator, and the fading-averaged
    // (conditional on geometry) version available for exponential signal
    // fading.
    McEstimate indicator;
    McEstimate conditional;
};

// Tagged-cell joint coverage with the tagged station pinned at the window
// center: per replication, stations and users are drawn fresh, users
// associate with the nearest station, and the cell of the pinned station
// must meet each threshold at every one of its users.  An empty cell counts
// as covered.  Requires exponential signal fading (for the conditional
// estimator).
std::vector<CoveragePoint> total_cell_coverage(
    const NetworkConfig& config, const std::vector<double>& thresholds,
    long long reps, std::uint64_t seed);

struct SpatialCoverage {
    McEstimate p_covered;               // P{probe covered by >= 1 station}
    std::vector<double> t_grid;
    std::vector<McEstimate> pgf;        // E[t^S], aligned with t_grid
};

// Sensing-region coverage at a fixed probe location: each station covers a
// random footprint (ball / square / ellipse of random size) and S counts the
// stations whose footprint contains the probe.  The pgf of S on a t-grid
// characterises the count law; p_covered = 1 - P{S = 0}.
SpatialCoverage spatial_coverage(const ProcessSpec& bs_spec,
                                 const Window& window,
                                 const RadiusModel& radius, Footprint footprint,
                                 const Point& probe,
                                 const std::vector<double>& t_grid,
                                 long long reps, std::uint64_t seed);

void to_json(nlohmann::json& j, const PathLoss& p);
void from_json(const nlohmann::json& j, PathLoss& p);
void to_json(nlohmann::json& j, const FadingModel& f);
void from_json(const nlohmann::json& j, FadingModel& f);
void to_json(nlohmann::json& j, const NetworkConfig& c);
void from_json(const nlohmann::json& j, NetworkConfig& c);
void to_json(nlohmann::json& j, const RadiusModel& r);
void from_json(const nlohmann::json& j, RadiusModel& r);

}  // namespace ppx
