#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ppx/pattern.hpp"
#include "ppx/process_spec.hpp"
#include "ppx/sampler.hpp"
#include "ppx/test_function.hpp"

namespace ppx {

// Monte Carlo estimate of a Laplace functional value: a mean in [0, 1].
struct LfEstimate {
    double mean = 1.0;
    double std_error = 0.0;
    long long replications = 0;
};

// Monte Carlo estimate of an unbounded mean (Campbell sums, interference).
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long replications = 0;
};

// Produces one realization per derived replication seed.  The bridge between
// specs (or transformed patterns) and the estimators below.
using PatternGen = std::function<PointPattern(std::uint64_t rep_seed)>;

PatternGen spec_generator(const ProcessSpec& spec, const Window& window,
                          const SamplerOptions& options = {});

// Core engine: sums_fn receives a pre-sized vector and fills one
// non-negative sum per family member for the given replication seed; the
// result estimates E[exp(-sum)] per member.
// Replications may fan out across threads; the reduction is sequential over
// stored per-replication values, so results do not depend on thread count.
std::vector<LfEstimate> exp_neg_sum_family(
    const std::function<void(std::uint64_t rep_seed, std::vector<double>& sums)>&
        sums_fn,
    std::size_t family_size, long long reps, std::uint64_t seed);

// Generic scalar-mean estimator with the same determinism contract.
McEstimate mc_mean(const std::function<double(std::uint64_t rep_seed)>& value_fn,
                   long long reps, std::uint64_t seed);

// Family variant: values_fn fills one finite value per family member for the
// given replication seed.  Shares the thread-count-independent reduction.
std::vector<McEstimate> mc_mean_family(
    const std::function<void(std::uint64_t rep_seed,
                             std::vector<double>& values)>& values_fn,
    std::size_t family_size, long long reps, std::uint64_t seed);

// E[exp(-sum_x u(x))] estimators.
LfEstimate lf_mc(const PatternGen& gen, const TestFunction& u, long long reps,
                 std::uint64_t seed);
std::vector<LfEstimate> lf_mc_family(const PatternGen& gen,
                                     const std::vector<TestFunction>& family,
                                     long long reps, std::uint64_t seed);
LfEstimate lf_mc(const ProcessSpec& spec, const Window& window,
                 const TestFunction& u, long long reps, std::uint64_t seed);
std::vector<LfEstimate> lf_mc_family(const ProcessSpec& spec,
                                     const Window& window,
                                     const std::vector<TestFunction>& family,
                                     long long reps, std::uint64_t seed);

// E[exp(-s * sum_x u(x))]: the Laplace transform of the aggregate.  At s = 1
// this coincides with lf_mc by construction (same seeds, same sums).
LfEstimate aggregate_lt_mc(const PatternGen& gen, const TestFunction& u,
                           double s, long long reps, std::uint64_t seed);

// Integral helpers on the window box.
double integral_one_minus_exp(const TestFunction& u, const Window& window);
double integral_exp_neg(const TestFunction& u, const Window& window);
double integral_u(const TestFunction& u, const Window& window);

// Closed form for the stationary Poisson process:
// exp(-lambda * integral of (1 - e^{-u})).
double lf_ppp_analytic(double lambda, const TestFunction& u, const Window& window);
// Same, for an arbitrary integrand u given as a callable.
double lf_ppp_analytic_fn(double lambda,
                          const std::function<double(const Point&)>& u,
                          const Window& window,
                          const QuadratureOptions& options);

// Exact Laplace functional where a closed form exists: stationary Poisson,
// mixed Poisson, gridded Cox, mixed binomial, deterministic lattice, and the
// perturbed lattice on toroidal windows.  Throws SpecError otherwise.
double lf_exact(const ProcessSpec& spec, const Window& window,
                const TestFunction& u);
bool lf_exact_available(const ProcessSpec& spec, const Window& window);

// Campbell means: exact E[sum_x u(x)] and its Monte Carlo counterpart.
double campbell_mean(const ProcessSpec& spec, const TestFunction& u,
                     const Window& window);
McEstimate campbell_mean_mc(const ProcessSpec& spec, const Window& window,
                            const TestFunction& u, long long reps,
                            std::uint64_t seed);

}  // namespace ppx
