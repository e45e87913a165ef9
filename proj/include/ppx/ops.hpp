#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppx/geometry.hpp"
#include "ppx/laplace.hpp"
#include "ppx/pattern.hpp"
#include "ppx/rng.hpp"

namespace ppx {

// Law of i.i.d. marks attached to pattern points.  The serializable kinds
// are location-free; a location-dependent law can be injected through the
// (non-serialized) location_law hook.
struct MarkSampler {
    enum class Kind { exponential, fixed, uniform, two_point };

    Kind kind = Kind::exponential;
    int mark_dim = 1;
    double mean = 1.0;   // exponential
    double value = 1.0;  // fixed
    double lo = 0.0;     // uniform
    double hi = 1.0;
    double v0 = 0.0;     // two_point, P{v0} = q
    double v1 = 1.0;
    double q = 0.5;

    // Optional location-dependent law; when set it replaces the kind.
    std::function<std::vector<double>(const Point&, Rng&)> location_law;

    static MarkSampler exponential_marks(double mean);
    static MarkSampler fixed_marks(double value);
    static MarkSampler uniform_marks(double lo, double hi);
    static MarkSampler two_point_marks(double v0, double v1, double q);

    void validate() const;
    std::vector<double> sample(const Point& x, Rng& rng) const;

    // Expected mark value for the serializable kinds; throws for a
    // location-dependent law.
    double mean_value() const;
};

struct MarkedPointPattern {
    PointPattern base;
    std::vector<std::vector<double>> marks;  // aligned with base.points
};

// Independent-deletion rule: retention probability constant, a deterministic
// radial profile, or one realization of a gridded random field per call.
struct ThinningRule {
    enum class Kind { p_const, p_location, p_random_field };

    Kind kind = Kind::p_const;
    double p = 1.0;  // p_const

    // p_location: retention interpolates linearly from p_center at the
    // origin to p_edge at ||x|| >= radius.
    double p_center = 1.0;
    double p_edge = 1.0;
    double radius = 1.0;

    // p_random_field: i.i.d. Beta(alpha, beta) cell values on a grid over
    // the pattern window.
    std::array<int, 3> cells{1, 1, 1};
    double alpha = 1.0;
    double beta = 1.0;

    // Optional deterministic location hook; replaces p_location's profile.
    std::function<double(const Point&)> location_fn;

    static ThinningRule constant(double p);
    static ThinningRule radial(double p_center, double p_edge, double radius);
    static ThinningRule random_field(std::array<int, 3> cells, double alpha,
                                     double beta);

    void validate() const;
};

// Law of the independent per-point displacement.
struct TranslationSampler {
    enum class Kind { gaussian, uniform_ball, uniform_box, fixed_shift };

    Kind kind = Kind::gaussian;
    std::vector<double> sigma{1.0};          // gaussian, per axis
    double radius = 1.0;                     // uniform_ball
    std::array<double, 3> lo{0, 0, 0};       // uniform_box
    std::array<double, 3> hi{1, 1, 1};
    std::array<double, 3> shift{0, 0, 0};    // fixed_shift

    static TranslationSampler gaussian_shift(std::vector<double> sigma);
    static TranslationSampler ball_shift(double radius);
    static TranslationSampler box_shift(std::array<double, 3> lo,
                                        std::array<double, 3> hi);
    static TranslationSampler fixed(std::array<double, 3> shift);

    void validate(int dim) const;
    Point sample(int dim, Rng& rng) const;
};

// Attaches i.i.d. marks; the base pattern is unchanged.
MarkedPointPattern mark(const PointPattern& pattern, const MarkSampler& sampler,
                        std::uint64_t seed);

// Independent deletion.  For the random-field rule, one field realization is
// drawn per call and then applied to all points.
PointPattern thin(const PointPattern& pattern, const ThinningRule& rule,
                  std::uint64_t seed);

// Independent displacement.  Toroidal windows wrap; euclidean windows keep
// every point and widen the window annotation to the bounding hull.
PointPattern translate(const PointPattern& pattern,
                       const TranslationSampler& sampler, std::uint64_t seed);

// Union of patterns over one common window; exact coordinate duplicates are
// an error (independent continuous processes collide with probability 0).
PointPattern superpose(const std::vector<PointPattern>& patterns);

// One marked realization per replication seed.
using MarkedGen = std::function<MarkedPointPattern(std::uint64_t rep_seed)>;

// Pairs a base generator with an independent mark stream.
MarkedGen marked_generator(const PatternGen& base, const MarkSampler& sampler);

// E[exp(-sum_i m_i u(x_i))]: the Laplace functional of the mark-weighted
// pattern.  Marks enter through their first component.
LfEstimate marked_lf_mc(const MarkedGen& gen, const TestFunction& u,
                        long long reps, std::uint64_t seed);
std::vector<LfEstimate> marked_lf_mc_family(
    const MarkedGen& gen, const std::vector<TestFunction>& family,
    long long reps, std::uint64_t seed);

void to_json(nlohmann::json& j, const MarkSampler& m);
void from_json(const nlohmann::json& j, MarkSampler& m);
void to_json(nlohmann::json& j, const ThinningRule& rule);
void from_json(const nlohmann::json& j, ThinningRule& rule);
void to_json(nlohmann::json& j, const TranslationSampler& t);
void from_json(const nlohmann::json& j, TranslationSampler& t);

}  // namespace ppx
