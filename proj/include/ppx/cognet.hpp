#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppx/geometry.hpp"
#include "ppx/laplace.hpp"
#include "ppx/netsim.hpp"
#include "ppx/order.hpp"
#include "ppx/pattern.hpp"

namespace ppx {

// Random active-user count with exact mean mu, drawn from a pool of L
// candidates.  Parameters are solved from mu so the schemes differ only in
// dispersion, never in mean.
struct SelectionScheme {
    enum class Kind { bernoulli, negative_binomial, poisson, two_point_extreme, fixed };

    Kind kind = Kind::bernoulli;
    long long L = 50;
    double mu = 5.0;

    static SelectionScheme bernoulli_scheme(long long L, double mu);
    static SelectionScheme negative_binomial_scheme(long long L, double mu);
    static SelectionScheme poisson_scheme(long long L, double mu);
    static SelectionScheme two_point_extreme_scheme(long long L, double mu);
    static SelectionScheme fixed_scheme(long long L, double mu);

    void validate() const;
    std::string name() const;

    // The count law of the active-user number before truncation at L.
    // bernoulli -> binomial(L, mu/L); negative_binomial -> NB(r=mu, p=1/2);
    // poisson -> Poisson(mu); two_point_extreme -> {0, 2mu} equally likely;
    // fixed -> mu.
    CountDistribution count() const;
};

// Uplink cognitive scenario: secondary users drawn uniformly in the region
// interfere with a primary receiver at pu_location while transmitting to the
// station at bs_location.
struct CognitiveConfig {
    Window region = make_box(2, -5.0, 5.0, Metric::euclidean);
    Point pu_location;                 // defaults to the origin
    Point bs_location{{2.5, 2.5, 0.0}};
    PathLoss pathloss;
    FadingModel fading;
    double noise = 0.1;
    double gamma_i = 1.0;              // mean-interference budget

    void validate() const;
};

struct Selection {
    PointPattern pattern;
    long long redraws = 0;  // truncation rejections before acceptance
};

// Draws the active-user count and places that many points uniformly in the
// window.  Counts above L are redrawn (telemetry in redraws); with no
// redraw the result is byte-identical to sampling the matching
// mixed-binomial process with the same seed.
Selection select(const SelectionScheme& scheme, const Window& window,
                 std::uint64_t seed);

// One draw of sum_x h_I g(||x - pu||) with fresh i.i.d. interference fades.
double aggregate_interference(const PointPattern& sus, const Point& pu,
                              const FadingModel& fading,
                              const PathLoss& pathloss, std::uint64_t seed);

// One draw of sum_x log(1 + h_S g(||x - bs||) / (noise + h_I g(||x - pu||))).
double sum_rate(const PointPattern& sus, const Point& bs, const Point& pu,
                const FadingModel& fading, const PathLoss& pathloss,
                double noise, std::uint64_t seed);

// Mean path gain from a uniform point of the region to pu_location:
// (1/|B|) integral of g(||x - pu||).  Requires a euclidean region and the
// bounded path-loss form (a = 1).
double mean_path_gain(const CognitiveConfig& config);

// Analytic mean aggregate interference mu * mean_path_gain * E[h_I]; equal
// for every scheme with the same mean.
double mean_interference_analytic(double mu, const CognitiveConfig& config);

// Largest mean active-user count whose analytic mean interference stays
// within the gamma_i budget.
double max_mean_users(const CognitiveConfig& config);

struct SchemeSummary {
    std::string scheme;
    McEstimate mean_interference;
    McEstimate mean_rate;
    McEstimate redraws_per_draw;  // truncation telemetry
    double analytic_interference = 0.0;
};

// Monte Carlo E[I] and E[rate] for one scheme.
SchemeSummary scheme_summary(const SelectionScheme& scheme,
                             const CognitiveConfig& config, long long reps,
                             std::uint64_t seed);

struct SirCurve {
    std::string scheme;
    std::vector<double> grid;            // linear SIR thresholds
    std::vector<McEstimate> ccdf;        // fading-averaged P{SIR > g}
    std::vector<McEstimate> ccdf_raw;    // indicator with a sampled fade
};

struct SirStudy {
    std::vector<SirCurve> curves;
    // Adjacent pairs in scheme order, built from the fading-averaged curves:
    // report i compares scheme i (lhs) against scheme i+1 (rhs).
    std::vector<OrderReport> pairwise;
};

// Primary-receiver SIR h_PU / I on a threshold grid, one curve per scheme.
// The fading-averaged CCDF uses P{h > t} = exp(-t / mean) for the
// exponential primary fade, so curve ordering reflects the transform
// ordering of the interference laws exactly.
SirStudy pu_sir_study(const std::vector<SelectionScheme>& schemes,
                      const CognitiveConfig& config,
                      const std::vector<double>& sir_grid, long long reps,
                      std::uint64_t seed);

// E[exp(-s I)] per grid value: the transform of the aggregate interference.
std::vector<LfEstimate> interference_lt_mc(const SelectionScheme& scheme,
                                           const CognitiveConfig& config,
                                           const std::vector<double>& s_grid,
                                           long long reps, std::uint64_t seed);

void to_json(nlohmann::json& j, const SelectionScheme& s);
void from_json(const nlohmann::json& j, SelectionScheme& s);
void to_json(nlohmann::json& j, const CognitiveConfig& c);
void from_json(const nlohmann::json& j, CognitiveConfig& c);

}  // namespace ppx
