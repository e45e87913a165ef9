#include "ppx/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppx/errors.hpp"

namespace ppx {

MarkSampler MarkSampler::exponential_marks(double mean) {
    MarkSampler m;
    m.kind = Kind::exponential;
    m.mean = mean;
    m.validate();
    return m;
}

MarkSampler MarkSampler::fixed_marks(double value) {
    MarkSampler m;
    m.kind = Kind::fixed;
    m.value = value;
    m.validate();
    return m;
}

MarkSampler MarkSampler::uniform_marks(double lo, double hi) {
    MarkSampler m;
    m.kind = Kind::uniform;
    m.lo = lo;
    m.hi = hi;
    m.validate();
    return m;
}

MarkSampler MarkSampler::two_point_marks(double v0, double v1, double q) {
    MarkSampler m;
    m.kind = Kind::two_point;
    m.v0 = v0;
    m.v1 = v1;
    m.q = q;
    m.validate();
    return m;
}

void MarkSampler::validate() const {
    if (mark_dim < 1) throw SpecError("mark_dim must be >= 1");
    if (location_law) return;
    switch (kind) {
        case Kind::exponential:
            if (mean <= 0.0) throw SpecError("exponential mark mean must be > 0");
            return;
        case Kind::fixed:
            return;
        case Kind::uniform:
            if (!(lo < hi)) throw SpecError("uniform mark law requires lo < hi");
            return;
        case Kind::two_point:
            if (q < 0.0 || q > 1.0) throw SpecError("two_point mark q in [0, 1]");
            return;
    }
    throw SpecError("unreachable mark kind");
}

double MarkSampler::mean_value() const {
    if (location_law) {
        throw SpecError("location-dependent mark laws have no scalar mean");
    }
    switch (kind) {
        case Kind::exponential:
            return mean;
        case Kind::fixed:
            return value;
        case Kind::uniform:
            return 0.5 * (lo + hi);
        case Kind::two_point:
            return q * v0 + (1.0 - q) * v1;
    }
    throw SpecError("unreachable mark kind");
}

std::vector<double> MarkSampler::sample(const Point& x, Rng& rng) const {
    if (location_law) {
        std::vector<double> m = location_law(x, rng);
        if (static_cast<int>(m.size()) != mark_dim) {
            throw SpecError("location mark law returned the wrong dimension");
        }
        return m;
    }
    std::vector<double> m(static_cast<std::size_t>(mark_dim));
    for (double& value_out : m) {
        switch (kind) {
            case Kind::exponential:
                value_out = rng.exponential_mean(mean);
                break;
            case Kind::fixed:
                value_out = value;
                break;
            case Kind::uniform:
                value_out = rng.uniform(lo, hi);
                break;
            case Kind::two_point:
                value_out = rng.bernoulli(q) ? v0 : v1;
                break;
        }
    }
    return m;
}

ThinningRule ThinningRule::constant(double p) {
    ThinningRule rule;
    rule.kind = Kind::p_const;
    rule.p = p;
    rule.validate();
    return rule;
}

ThinningRule ThinningRule::radial(double p_center, double p_edge, double radius) {
    ThinningRule rule;
    rule.kind = Kind::p_location;
    rule.p_center = p_center;
    rule.p_edge = p_edge;
    rule.radius = radius;
    rule.validate();
    return rule;
}

ThinningRule ThinningRule::random_field(std::array<int, 3> cells, double alpha,
                                        double beta) {
    ThinningRule rule;
    rule.kind = Kind::p_random_field;
    rule.cells = cells;
    rule.alpha = alpha;
    rule.beta = beta;
    rule.validate();
    return rule;
}

void ThinningRule::validate() const {
    switch (kind) {
        case Kind::p_const:
            if (p < 0.0 || p > 1.0) {
                throw SpecError("retention probability must be in [0, 1]");
            }
            return;
        case Kind::p_location:
            if (location_fn) return;
            if (p_center < 0.0 || p_center > 1.0 || p_edge < 0.0 || p_edge > 1.0) {
                throw SpecError("retention probabilities must be in [0, 1]");
            }
            if (radius <= 0.0) throw SpecError("radial profile radius must be > 0");
            return;
        case Kind::p_random_field:
            for (int c : cells) {
                if (c < 1) throw SpecError("field grid needs >= 1 cell per axis");
            }
            if (alpha <= 0.0 || beta <= 0.0) {
                throw SpecError("beta field parameters must be > 0");
            }
            return;
    }
    throw SpecError("unreachable thinning kind");
}

TranslationSampler TranslationSampler::gaussian_shift(std::vector<double> sigma) {
    TranslationSampler t;
    t.kind = Kind::gaussian;
    t.sigma = std::move(sigma);
    return t;
}

TranslationSampler TranslationSampler::ball_shift(double radius) {
    TranslationSampler t;
    t.kind = Kind::uniform_ball;
    t.radius = radius;
    return t;
}

TranslationSampler TranslationSampler::box_shift(std::array<double, 3> lo,
                                                 std::array<double, 3> hi) {
    TranslationSampler t;
    t.kind = Kind::uniform_box;
    t.lo = lo;
    t.hi = hi;
    return t;
}

TranslationSampler TranslationSampler::fixed(std::array<double, 3> shift) {
    TranslationSampler t;
    t.kind = Kind::fixed_shift;
    t.shift = shift;
    return t;
}

void TranslationSampler::validate(int dim) const {
    switch (kind) {
        case Kind::gaussian:
            if (static_cast<int>(sigma.size()) < dim) {
                throw SpecError("gaussian displacement needs sigma per axis");
            }
            for (int axis = 0; axis < dim; ++axis) {
                if (sigma[axis] < 0.0) {
                    throw SpecError("displacement sigma must be >= 0");
                }
            }
            return;
        case Kind::uniform_ball:
            if (radius <= 0.0) throw SpecError("displacement radius must be > 0");
            return;
        case Kind::uniform_box:
            for (int axis = 0; axis < dim; ++axis) {
                if (!(lo[axis] <= hi[axis])) {
                    throw SpecError("displacement box requires lo <= hi");
                }
            }
            return;
        case Kind::fixed_shift:
            return;
    }
    throw SpecError("unreachable translation kind");
}

Point TranslationSampler::sample(int dim, Rng& rng) const {
    Point d;
    switch (kind) {
        case Kind::gaussian:
            for (int axis = 0; axis < dim; ++axis) {
                d[axis] = sigma[axis] > 0.0 ? rng.normal(0.0, sigma[axis]) : 0.0;
            }
            return d;
        case Kind::uniform_ball:
            for (;;) {
                double norm2 = 0.0;
                for (int axis = 0; axis < dim; ++axis) {
                    d[axis] = rng.uniform(-radius, radius);
                    norm2 += d[axis] * d[axis];
                }
                if (norm2 <= radius * radius) return d;
            }
        case Kind::uniform_box:
            for (int axis = 0; axis < dim; ++axis) {
                d[axis] = lo[axis] == hi[axis] ? lo[axis]
                                               : rng.uniform(lo[axis], hi[axis]);
            }
            return d;
        case Kind::fixed_shift:
            for (int axis = 0; axis < dim; ++axis) d[axis] = shift[axis];
            return d;
    }
    throw SpecError("unreachable translation kind");
}

MarkedPointPattern mark(const PointPattern& pattern, const MarkSampler& sampler,
                        std::uint64_t seed) {
    sampler.validate();
    MarkedPointPattern marked;
    marked.base = pattern;
    marked.marks.reserve(pattern.points.size());
    Rng rng(mix_seed(seed, stream::kMarks));
    for (const Point& x : pattern.points) {
        marked.marks.push_back(sampler.sample(x, rng));
    }
    return marked;
}

PointPattern thin(const PointPattern& pattern, const ThinningRule& rule,
                  std::uint64_t seed) {
    rule.validate();
    Rng rng(mix_seed(seed, stream::kThinning));
    const Window& window = pattern.window;
    const int dim = window.dim;

    // One field realization per call, drawn before any retention decision.
    std::vector<double> field;
    if (rule.kind == ThinningRule::Kind::p_random_field) {
        std::size_t total = 1;
        for (int axis = 0; axis < dim; ++axis) {
            total *= static_cast<std::size_t>(rule.cells[axis]);
        }
        field.resize(total);
        for (double& v : field) v = rng.beta(rule.alpha, rule.beta);
    }

    const auto retention = [&](const Point& x) {
        switch (rule.kind) {
            case ThinningRule::Kind::p_const:
                return rule.p;
            case ThinningRule::Kind::p_location: {
                if (rule.location_fn) {
                    const double value = rule.location_fn(x);
                    if (value < 0.0 || value > 1.0) {
                        throw SpecError("location retention outside [0, 1]");
                    }
                    return value;
                }
                double norm2 = 0.0;
                for (int axis = 0; axis < dim; ++axis) norm2 += x[axis] * x[axis];
                const double frac =
                    std::min(std::sqrt(norm2) / rule.radius, 1.0);
                return rule.p_center + (rule.p_edge - rule.p_center) * frac;
            }
            case ThinningRule::Kind::p_random_field: {
                std::size_t index = 0;
                for (int axis = 0; axis < dim; ++axis) {
                    const double frac = (x[axis] - window.lower[axis]) /
                                        window.side(axis);
                    int cell = static_cast<int>(
                        frac * static_cast<double>(rule.cells[axis]));
                    cell = std::clamp(cell, 0, rule.cells[axis] - 1);
                    index = index * static_cast<std::size_t>(rule.cells[axis]) +
                            static_cast<std::size_t>(cell);
                }
                return field[index];
            }
        }
        throw SpecError("unreachable thinning kind");
    };

    PointPattern out;
    out.window = pattern.window;
    out.seed = pattern.seed;
    out.spec_id = pattern.spec_id + "|thinned";
    for (const Point& x : pattern.points) {
        if (rng.bernoulli(retention(x))) out.points.push_back(x);
    }
    return out;
}

PointPattern translate(const PointPattern& pattern,
                       const TranslationSampler& sampler, std::uint64_t seed) {
    const int dim = pattern.window.dim;
    sampler.validate(dim);
    Rng rng(mix_seed(seed, stream::kTranslation));
    PointPattern out;
    out.window = pattern.window;
    out.seed = pattern.seed;
    out.spec_id = pattern.spec_id + "|translated";
    out.points.reserve(pattern.points.size());
    for (const Point& x : pattern.points) {
        const Point d = sampler.sample(dim, rng);
        Point y = x;
        for (int axis = 0; axis < dim; ++axis) y[axis] += d[axis];
        if (pattern.window.metric == Metric::toroidal) {
            y = pattern.window.wrap(y);
        }
        out.points.push_back(y);
    }
    // Euclidean windows keep emigrants; the window annotation widens to a
    // bounding box so the pattern invariant (points inside window) holds.
    if (pattern.window.metric == Metric::euclidean) {
        for (const Point& y : out.points) {
            for (int axis = 0; axis < dim; ++axis) {
                out.window.lower[axis] = std::min(out.window.lower[axis], y[axis]);
                if (y[axis] >= out.window.upper[axis]) {
                    out.window.upper[axis] =
                        std::nextafter(y[axis], std::numeric_limits<double>::max());
                }
            }
        }
    }
    return out;
}

PointPattern superpose(const std::vector<PointPattern>& patterns) {
    if (patterns.empty()) throw SpecError("superpose needs at least one pattern");
    const Window& window = patterns.front().window;
    PointPattern out;
    out.window = window;
    out.seed = patterns.front().seed;
    out.spec_id = patterns.front().spec_id;
    for (std::size_t i = 1; i < patterns.size(); ++i) {
        if (!(patterns[i].window == window)) {
            throw SpecError("superpose requires identical windows");
        }
        out.spec_id += "+" + patterns[i].spec_id;
    }
    for (const PointPattern& pattern : patterns) {
        out.points.insert(out.points.end(), pattern.points.begin(),
                          pattern.points.end());
    }
    std::vector<Point> sorted = out.points;
    std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) {
        return a.coords < b.coords;
    });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw SpecError("superpose found exact duplicate points");
    }
    return out;
}

MarkedGen marked_generator(const PatternGen& base, const MarkSampler& sampler) {
    sampler.validate();
    return [base, sampler](std::uint64_t rep_seed) {
        return mark(base(rep_seed), sampler, rep_seed);
    };
}

LfEstimate marked_lf_mc(const MarkedGen& gen, const TestFunction& u,
                        long long reps, std::uint64_t seed) {
    return marked_lf_mc_family(gen, {u}, reps, seed).front();
}

std::vector<LfEstimate> marked_lf_mc_family(
    const MarkedGen& gen, const std::vector<TestFunction>& family,
    long long reps, std::uint64_t seed) {
    if (family.empty()) throw SpecError("test function family must be non-empty");
    for (const TestFunction& u : family) u.validate();
    return exp_neg_sum_family(
        [&gen, &family](std::uint64_t rep_seed, std::vector<double>& sums) {
            const MarkedPointPattern marked = gen(rep_seed);
            if (marked.marks.size() != marked.base.points.size()) {
                throw SpecError("marks are not aligned with the base pattern");
            }
            const int dim = marked.base.window.dim;
            for (std::size_t i = 0; i < marked.base.points.size(); ++i) {
                if (marked.marks[i].empty()) {
                    throw SpecError("marked LF needs at least one mark component");
                }
                const double m = marked.marks[i].front();
                for (std::size_t k = 0; k < family.size(); ++k) {
                    sums[k] += m * family[k](marked.base.points[i], dim);
                }
            }
        },
        family.size(), reps, seed);
}

void to_json(nlohmann::json& j, const MarkSampler& m) {
    switch (m.kind) {
        case MarkSampler::Kind::exponential:
            j = {{"kind", "exponential"}, {"mean", m.mean}};
            break;
        case MarkSampler::Kind::fixed:
            j = {{"kind", "fixed"}, {"value", m.value}};
            break;
        case MarkSampler::Kind::uniform:
            j = {{"kind", "uniform"}, {"lo", m.lo}, {"hi", m.hi}};
            break;
        case MarkSampler::Kind::two_point:
            j = {{"kind", "two_point"}, {"v0", m.v0}, {"v1", m.v1}, {"q", m.q}};
            break;
    }
    j["mark_dim"] = m.mark_dim;
}

void from_json(const nlohmann::json& j, MarkSampler& m) {
    m = MarkSampler{};
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "exponential") {
        m.kind = MarkSampler::Kind::exponential;
        m.mean = j.at("mean").get<double>();
    } else if (kind == "fixed") {
        m.kind = MarkSampler::Kind::fixed;
        m.value = j.at("value").get<double>();
    } else if (kind == "uniform") {
        m.kind = MarkSampler::Kind::uniform;
        m.lo = j.at("lo").get<double>();
        m.hi = j.at("hi").get<double>();
    } else if (kind == "two_point") {
        m.kind = MarkSampler::Kind::two_point;
        m.v0 = j.at("v0").get<double>();
        m.v1 = j.at("v1").get<double>();
        m.q = j.at("q").get<double>();
    } else {
        throw SpecError("unknown mark sampler kind: " + kind);
    }
    m.mark_dim = j.value("mark_dim", 1);
    m.validate();
}

void to_json(nlohmann::json& j, const ThinningRule& rule) {
    switch (rule.kind) {
        case ThinningRule::Kind::p_const:
            j = {{"kind", "p_const"}, {"p", rule.p}};
            break;
        case ThinningRule::Kind::p_location:
            j = {{"kind", "p_location"},
                 {"p_center", rule.p_center},
                 {"p_edge", rule.p_edge},
                 {"radius", rule.radius}};
            break;
        case ThinningRule::Kind::p_random_field:
            j = {{"kind", "p_random_field"},
                 {"cells", rule.cells},
                 {"alpha", rule.alpha},
                 {"beta", rule.beta}};
            break;
    }
}

void from_json(const nlohmann::json& j, ThinningRule& rule) {
    rule = ThinningRule{};
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "p_const") {
        rule.kind = ThinningRule::Kind::p_const;
        rule.p = j.at("p").get<double>();
    } else if (kind == "p_location") {
        rule.kind = ThinningRule::Kind::p_location;
        rule.p_center = j.at("p_center").get<double>();
        rule.p_edge = j.at("p_edge").get<double>();
        rule.radius = j.at("radius").get<double>();
    } else if (kind == "p_random_field") {
        rule.kind = ThinningRule::Kind::p_random_field;
        const auto& cells = j.at("cells");
        rule.cells = {1, 1, 1};
        for (std::size_t axis = 0; axis < 3 && axis < cells.size(); ++axis) {
            rule.cells[axis] = cells[axis].get<int>();
        }
        rule.alpha = j.at("alpha").get<double>();
        rule.beta = j.at("beta").get<double>();
    } else {
        throw SpecError("unknown thinning kind: " + kind);
    }
    rule.validate();
}

void to_json(nlohmann::json& j, const TranslationSampler& t) {
    switch (t.kind) {
        case TranslationSampler::Kind::gaussian:
            j = {{"kind", "gaussian"}, {"sigma", t.sigma}};
            break;
        case TranslationSampler::Kind::uniform_ball:
            j = {{"kind", "uniform_ball"}, {"radius", t.radius}};
            break;
        case TranslationSampler::Kind::uniform_box:
            j = {{"kind", "uniform_box"}, {"lo", t.lo}, {"hi", t.hi}};
            break;
        case TranslationSampler::Kind::fixed_shift:
            j = {{"kind", "fixed_shift"}, {"shift", t.shift}};
            break;
    }
}

void from_json(const nlohmann::json& j, TranslationSampler& t) {
    t = TranslationSampler{};
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") {
        t.kind = TranslationSampler::Kind::gaussian;
        t.sigma = j.at("sigma").get<std::vector<double>>();
    } else if (kind == "uniform_ball") {
        t.kind = TranslationSampler::Kind::uniform_ball;
        t.radius = j.at("radius").get<double>();
    } else if (kind == "uniform_box") {
        t.kind = TranslationSampler::Kind::uniform_box;
        t.lo = j.at("lo").get<std::array<double, 3>>();
        t.hi = j.at("hi").get<std::array<double, 3>>();
    } else if (kind == "fixed_shift") {
        t.kind = TranslationSampler::Kind::fixed_shift;
        t.shift = j.at("shift").get<std::array<double, 3>>();
    } else {
        throw SpecError("unknown translation kind: " + kind);
    }
}

}  // namespace ppx
