#include "ppx/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "ppx/errors.hpp"
#include "ppx/parallel.hpp"
#include "ppx/quadrature.hpp"
#include "ppx/rng.hpp"

namespace ppx {

namespace {

double pattern_sum(const PointPattern& pattern, const TestFunction& u) {
    const int dim = pattern.window.dim;
    double total = 0.0;
    for (const Point& x : pattern.points) total += u(x, dim);
    return total;
}

// Mean and population standard error of stored values; sequential two-pass
// so the result is independent of how the values were produced.
void reduce_slice(const std::vector<double>& values, std::size_t stride,
                  std::size_t offset, long long reps, double& mean,
                  double& std_error) {
    double total = 0.0;
    bool constant = true;
    const double first = values[offset];
    for (long long r = 0; r < reps; ++r) {
        const double v = values[static_cast<std::size_t>(r) * stride + offset];
        total += v;
        constant = constant && v == first;
    }
    if (constant) {
        // Degenerate slice: report the exact value with zero error so exact
        // comparisons downstream stay exact.
        mean = first;
        std_error = 0.0;
        return;
    }
    mean = total / static_cast<double>(reps);
    double sq = 0.0;
    for (long long r = 0; r < reps; ++r) {
        const double d =
            values[static_cast<std::size_t>(r) * stride + offset] - mean;
        sq += d * d;
    }
    const double variance = std::max(sq / static_cast<double>(reps), 0.0);
    std_error = std::sqrt(variance / static_cast<double>(reps));
}

std::vector<LfEstimate> lt_mc_family(
    const PatternGen& gen, const std::vector<TestFunction>& family, double s,
    long long reps, std::uint64_t seed) {
    if (family.empty()) throw SpecError("test function family must not be empty");
    if (s < 0.0) throw SpecError("laplace transform argument must be >= 0");
    const std::size_t width = family.size();
    return exp_neg_sum_family(
        [&gen, &family, s, width](std::uint64_t rep_seed,
                                  std::vector<double>& sums) {
            const PointPattern pattern = gen(rep_seed);
            sums.resize(width);
            for (std::size_t k = 0; k < width; ++k) {
                sums[k] = s * pattern_sum(pattern, family[k]);
            }
        },
        width, reps, seed);
}

// Sub-intervals of the window axis covered by the unwrapped cell interval
// [lo, hi] under toroidal wrap; one or two pieces.
std::vector<std::array<double, 2>> wrapped_axis_segments(double lo, double hi,
                                                         double wlo,
                                                         double whi) {
    const double len = whi - wlo;
    double t = std::fmod(lo - wlo, len);
    if (t < 0.0) t += len;
    const double start = wlo + t;
    const double width = hi - lo;
    if (start + width <= whi + 1e-12) {
        return {{start, start + width}};
    }
    return {{start, whi}, {wlo, wlo + (start + width - whi)}};
}

// Exact LF of a toroidal perturbed lattice: a product over lattice cells of
// the replica-count PGF evaluated at the cell average of e^{-u}.
double lf_exact_perturbed_toroidal(const ProcessSpec& spec, const Window& window,
                                   const TestFunction& u) {
    const int dim = window.dim;
    std::array<long long, 3> counts{1, 1, 1};
    std::array<double, 3> step{1.0, 1.0, 1.0};
    std::array<long long, 3> start{0, 0, 0};
    for (int axis = 0; axis < dim; ++axis) {
        for (int col = 0; col < dim; ++col) {
            if (axis != col && std::abs(spec.G.at(axis, col)) > 1e-12) {
                throw SpecError(
                    "exact perturbed-lattice LF needs a diagonal generator");
            }
        }
        step[axis] = spec.G.at(axis, axis);
        const double ratio = window.side(axis) / step[axis];
        if (step[axis] <= 0.0 || std::abs(ratio - std::round(ratio)) > 1e-9) {
            throw SpecError("exact perturbed-lattice LF needs a tiling lattice");
        }
        counts[axis] = static_cast<long long>(std::round(ratio));
        start[axis] = static_cast<long long>(
            std::ceil(window.lower[axis] / step[axis] - 1e-9));
    }

    const QuadratureOptions options = u.quadrature_options(window);
    const double cell_volume = std::abs(spec.G.det());
    double log_lf = 0.0;
    std::array<long long, 3> idx{0, 0, 0};
    for (long long i = 0; i < counts[0]; ++i) {
        idx[0] = start[0] + i;
        for (long long j = 0; j < (dim > 1 ? counts[1] : 1); ++j) {
            idx[1] = start[1] + j;
            for (long long k = 0; k < (dim > 2 ? counts[2] : 1); ++k) {
                idx[2] = start[2] + k;
                // Cell of this site, wrapped into the window as a union of
                // up to 2^dim boxes.
                std::array<std::vector<std::array<double, 2>>, 3> segments;
                for (int axis = 0; axis < dim; ++axis) {
                    const double center =
                        step[axis] * static_cast<double>(idx[axis]);
                    segments[axis] = wrapped_axis_segments(
                        center - 0.5 * step[axis], center + 0.5 * step[axis],
                        window.lower[axis], window.upper[axis]);
                }
                double mass = 0.0;
                const std::size_t n0 = segments[0].size();
                const std::size_t n1 = dim > 1 ? segments[1].size() : 1;
                const std::size_t n2 = dim > 2 ? segments[2].size() : 1;
                for (std::size_t b0 = 0; b0 < n0; ++b0) {
                    for (std::size_t b1 = 0; b1 < n1; ++b1) {
                        for (std::size_t b2 = 0; b2 < n2; ++b2) {
                            std::array<double, 3> lo{0, 0, 0};
                            std::array<double, 3> hi{1, 1, 1};
                            lo[0] = segments[0][b0][0];
                            hi[0] = segments[0][b0][1];
                            if (dim > 1) {
                                lo[1] = segments[1][b1][0];
                                hi[1] = segments[1][b1][1];
                            }
                            if (dim > 2) {
                                lo[2] = segments[2][b2][0];
                                hi[2] = segments[2][b2][1];
                            }
                            mass += integrate_box(
                                [&u, dim](const Point& p) {
                                    return std::exp(-u(p, dim));
                                },
                                dim, lo, hi, options);
                        }
                    }
                }
                const double t = std::clamp(mass / cell_volume, 0.0, 1.0);
                const double factor = spec.replicas.pgf(t);
                if (factor <= 0.0) {
                    throw NumericError("perturbed-lattice LF factor underflow");
                }
                log_lf += std::log(factor);
            }
        }
    }
    return std::exp(log_lf);
}

double lf_exact_cox_grid(const ProcessSpec& spec, const Window& window,
                         const TestFunction& u) {
    const QuadratureOptions options = u.quadrature_options(window);
    const int dim = window.dim;
    std::array<int, 3> cells{1, 1, 1};
    for (int axis = 0; axis < dim; ++axis) cells[axis] = spec.cells[axis];
    double log_lf = 0.0;
    for (int i = 0; i < cells[0]; ++i) {
        for (int j = 0; j < cells[1]; ++j) {
            for (int k = 0; k < cells[2]; ++k) {
                const std::array<int, 3> index{i, j, k};
                std::array<double, 3> lo{0, 0, 0};
                std::array<double, 3> hi{1, 1, 1};
                for (int axis = 0; axis < dim; ++axis) {
                    const double step =
                        window.side(axis) / static_cast<double>(cells[axis]);
                    lo[axis] = window.lower[axis] + step * index[axis];
                    hi[axis] = lo[axis] + step;
                }
                const double mass = integrate_box(
                    [&u, dim](const Point& p) {
                        return -std::expm1(-u(p, dim));
                    },
                    dim, lo, hi, options);
                const double factor = spec.cell_intensity.laplace(mass);
                if (factor <= 0.0) {
                    throw NumericError("cox LF factor underflow");
                }
                log_lf += std::log(factor);
            }
        }
    }
    return std::exp(log_lf);
}

}  // namespace

PatternGen spec_generator(const ProcessSpec& spec, const Window& window,
                          const SamplerOptions& options) {
    window.validate();
    spec.validate(window.dim);
    return [spec, window, options](std::uint64_t rep_seed) {
        return sample(spec, window, rep_seed, options);
    };
}

std::vector<LfEstimate> exp_neg_sum_family(
    const std::function<void(std::uint64_t rep_seed, std::vector<double>& sums)>&
        sums_fn,
    std::size_t family_size, long long reps, std::uint64_t seed) {
    if (reps < 2) throw SpecError("estimators need reps >= 2");
    if (family_size == 0) throw SpecError("family size must be >= 1");
    std::vector<double> values(static_cast<std::size_t>(reps) * family_size);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
        const std::uint64_t rep_seed =
            mix_seed(seed, static_cast<std::uint64_t>(r));
        std::vector<double> sums(family_size, 0.0);
        sums_fn(rep_seed, sums);
        if (sums.size() != family_size) {
            throw SpecError("sum generator returned the wrong family size");
        }
        for (std::size_t k = 0; k < family_size; ++k) {
            if (!(sums[k] >= 0.0)) {
                throw NumericError("negative aggregate sum in LF estimator");
            }
            values[r * family_size + k] = std::exp(-sums[k]);
        }
    });
    std::vector<LfEstimate> out(family_size);
    for (std::size_t k = 0; k < family_size; ++k) {
        reduce_slice(values, family_size, k, reps, out[k].mean,
                     out[k].std_error);
        out[k].replications = reps;
    }
    return out;
}

McEstimate mc_mean(const std::function<double(std::uint64_t rep_seed)>& value_fn,
                   long long reps, std::uint64_t seed) {
    return mc_mean_family(
               [&](std::uint64_t rep_seed, std::vector<double>& values) {
                   values[0] = value_fn(rep_seed);
               },
               1, reps, seed)
        .front();
}

std::vector<McEstimate> mc_mean_family(
    const std::function<void(std::uint64_t rep_seed,
                             std::vector<double>& values)>& values_fn,
    std::size_t family_size, long long reps, std::uint64_t seed) {
    if (reps < 2) throw SpecError("estimators need reps >= 2");
    if (family_size == 0) throw SpecError("family size must be >= 1");
    std::vector<double> values(static_cast<std::size_t>(reps) * family_size);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
        const std::uint64_t rep_seed =
            mix_seed(seed, static_cast<std::uint64_t>(r));
        std::vector<double> slot(family_size, 0.0);
        values_fn(rep_seed, slot);
        if (slot.size() != family_size) {
            throw SpecError("value generator returned the wrong family size");
        }
        for (std::size_t k = 0; k < family_size; ++k) {
            if (!std::isfinite(slot[k])) {
                throw NumericError("non-finite value in mean estimator");
            }
            values[r * family_size + k] = slot[k];
        }
    });
    std::vector<McEstimate> out(family_size);
    for (std::size_t k = 0; k < family_size; ++k) {
        reduce_slice(values, family_size, k, reps, out[k].mean,
                     out[k].std_error);
        out[k].replications = reps;
    }
    return out;
}

LfEstimate lf_mc(const PatternGen& gen, const TestFunction& u, long long reps,
                 std::uint64_t seed) {
    return lt_mc_family(gen, {u}, 1.0, reps, seed).front();
}

std::vector<LfEstimate> lf_mc_family(const PatternGen& gen,
                                     const std::vector<TestFunction>& family,
                                     long long reps, std::uint64_t seed) {
    return lt_mc_family(gen, family, 1.0, reps, seed);
}

LfEstimate lf_mc(const ProcessSpec& spec, const Window& window,
                 const TestFunction& u, long long reps, std::uint64_t seed) {
    return lf_mc(spec_generator(spec, window), u, reps, seed);
}

std::vector<LfEstimate> lf_mc_family(const ProcessSpec& spec,
                                     const Window& window,
                                     const std::vector<TestFunction>& family,
                                     long long reps, std::uint64_t seed) {
    return lf_mc_family(spec_generator(spec, window), family, reps, seed);
}

LfEstimate aggregate_lt_mc(const PatternGen& gen, const TestFunction& u,
                           double s, long long reps, std::uint64_t seed) {
    return lt_mc_family(gen, {u}, s, reps, seed).front();
}

double integral_one_minus_exp(const TestFunction& u, const Window& window) {
    const int dim = window.dim;
    return integrate_window(
        [&u, dim](const Point& p) { return -std::expm1(-u(p, dim)); }, window,
        u.quadrature_options(window));
}

double integral_exp_neg(const TestFunction& u, const Window& window) {
    const int dim = window.dim;
    return integrate_window(
        [&u, dim](const Point& p) { return std::exp(-u(p, dim)); }, window,
        u.quadrature_options(window));
}

double integral_u(const TestFunction& u, const Window& window) {
    const int dim = window.dim;
    return integrate_window([&u, dim](const Point& p) { return u(p, dim); },
                            window, u.quadrature_options(window));
}

double lf_ppp_analytic(double lambda, const TestFunction& u,
                       const Window& window) {
    if (lambda < 0.0) throw SpecError("intensity must be >= 0");
    if (lambda == 0.0) return 1.0;
    return std::exp(-lambda * integral_one_minus_exp(u, window));
}

double lf_ppp_analytic_fn(double lambda,
                          const std::function<double(const Point&)>& u,
                          const Window& window,
                          const QuadratureOptions& options) {
    if (lambda < 0.0) throw SpecError("intensity must be >= 0");
    if (lambda == 0.0) return 1.0;
    const double mass = integrate_window(
        [&u](const Point& p) { return -std::expm1(-u(p)); }, window, options);
    return std::exp(-lambda * mass);
}

bool lf_exact_available(const ProcessSpec& spec, const Window& window) {
    switch (spec.kind) {
        case ProcessSpec::Kind::stationary_poisson:
        case ProcessSpec::Kind::mixed_poisson:
        case ProcessSpec::Kind::cox_grid:
        case ProcessSpec::Kind::mixed_binomial:
        case ProcessSpec::Kind::lattice:
            return true;
        case ProcessSpec::Kind::perturbed_lattice: {
            if (window.metric != Metric::toroidal) return false;
            for (int row = 0; row < window.dim; ++row) {
                for (int col = 0; col < window.dim; ++col) {
                    if (row != col && std::abs(spec.G.at(row, col)) > 1e-12) {
                        return false;
                    }
                }
                const double g = spec.G.at(row, row);
                if (g <= 0.0) return false;
                const double ratio = window.side(row) / g;
                if (std::abs(ratio - std::round(ratio)) > 1e-9) return false;
            }
            return true;
        }
        case ProcessSpec::Kind::cluster:
            return false;
    }
    return false;
}

double lf_exact(const ProcessSpec& spec, const Window& window,
                const TestFunction& u) {
    window.validate();
    spec.validate(window.dim);
    u.validate();
    switch (spec.kind) {
        case ProcessSpec::Kind::stationary_poisson:
            return lf_ppp_analytic(spec.lambda, u, window);
        case ProcessSpec::Kind::mixed_poisson: {
            const double mass = integral_one_minus_exp(u, window);
            double total = 0.0;
            for (const auto& row : spec.table) {
                total += row[1] * std::exp(-row[0] * mass);
            }
            return total;
        }
        case ProcessSpec::Kind::cox_grid:
            return lf_exact_cox_grid(spec, window, u);
        case ProcessSpec::Kind::mixed_binomial: {
            const double t = std::clamp(
                integral_exp_neg(u, window) / window.volume(), 0.0, 1.0);
            return spec.N.pgf(t);
        }
        case ProcessSpec::Kind::perturbed_lattice:
            if (window.metric != Metric::toroidal) {
                throw SpecError(
                    "exact perturbed-lattice LF is defined on toroidal windows");
            }
            return lf_exact_perturbed_toroidal(spec, window, u);
        case ProcessSpec::Kind::lattice: {
            const PointPattern pattern = sample(spec, window, 0);
            return std::exp(-pattern_sum(pattern, u));
        }
        case ProcessSpec::Kind::cluster:
            throw SpecError("no closed-form LF for cluster processes");
    }
    throw SpecError("unreachable process kind");
}

double campbell_mean(const ProcessSpec& spec, const TestFunction& u,
                     const Window& window) {
    window.validate();
    spec.validate(window.dim);
    switch (spec.kind) {
        case ProcessSpec::Kind::mixed_binomial:
            return spec.N.mean() * integral_u(u, window) / window.volume();
        case ProcessSpec::Kind::lattice: {
            const PointPattern pattern = sample(spec, window, 0);
            return pattern_sum(pattern, u);
        }
        case ProcessSpec::Kind::cluster:
            if (spec.parent->kind == ProcessSpec::Kind::mixed_binomial) {
                if (window.metric != Metric::toroidal) {
                    throw SpecError(
                        "cluster over mixed_binomial parents has a closed-form "
                        "Campbell mean only on toroidal windows");
                }
                return spec.parent->N.mean() * spec.representative.count.mean() *
                       integral_u(u, window) / window.volume();
            }
            return spec.density() * integral_u(u, window);
        default:
            return spec.density() * integral_u(u, window);
    }
}

McEstimate campbell_mean_mc(const ProcessSpec& spec, const Window& window,
                            const TestFunction& u, long long reps,
                            std::uint64_t seed) {
    const PatternGen gen = spec_generator(spec, window);
    return mc_mean(
        [&gen, &u](std::uint64_t rep_seed) {
            return pattern_sum(gen(rep_seed), u);
        },
        reps, seed);
}

}  // namespace ppx
