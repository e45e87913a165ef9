#pragma once

// Deterministic random number generation.
//
// All stochastic output of the library flows through Rng so that a run is
// reproducible from (seed, stream) alone, independent of platform, standard
// library vendor, and thread count.  The standard <random> distributions are
// implementation-defined, so every sampler here is written out explicitly.

#include <cstdint>
#include <vector>

namespace ppx {

// SplitMix64 step.  Used to expand a 64-bit seed into engine state and to
// derive independent streams.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives a child seed for a named purpose.  Different streams from the same
// seed are statistically independent for simulation purposes.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Stream tags.  Each subsystem draws from its own stream so that adding a
// consumer never perturbs the draws seen by another.
namespace stream {
inline constexpr std::uint64_t kSampler = 0x5331'0001;
inline constexpr std::uint64_t kMarks = 0x5331'0002;
inline constexpr std::uint64_t kThinning = 0x5331'0003;
inline constexpr std::uint64_t kTranslation = 0x5331'0004;
inline constexpr std::uint64_t kLaplace = 0x5331'0005;
inline constexpr std::uint64_t kNetwork = 0x5331'0006;
inline constexpr std::uint64_t kSelection = 0x5331'0007;
inline constexpr std::uint64_t kFadingSignal = 0x5331'0008;
inline constexpr std::uint64_t kFadingInterf = 0x5331'0009;
inline constexpr std::uint64_t kReplicate = 0x5331'000A;
inline constexpr std::uint64_t kUsers = 0x5331'000B;
inline constexpr std::uint64_t kRadius = 0x5331'000C;
}  // namespace stream

// xoshiro256++ engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform();
    // Uniform in [lo, hi).
    double uniform(double lo, double hi);
    // Uniform in (0, 1]; never returns 0, safe as a log argument.
    double uniform_pos();

    // Standard normal via Box-Muller; caches the second deviate.
    double normal();
    double normal(double mean, double sd);

    // Exponential with the given mean (not rate).
    double exponential_mean(double mean);

    // Bernoulli(p).
    bool bernoulli(double p);

    // Poisson(mean), exact.  Multiplicative Knuth in chunks so large means
    // do not underflow.
    long long poisson(double mean);

    // Binomial(n, p) as a Bernoulli sum, exact.
    long long binomial(long long n, double p);

    // Negative binomial: number of failures before the r-th success with
    // success probability p.  Integral r uses a geometric sum; otherwise the
    // gamma-Poisson mixture.
    long long negative_binomial(double r, double p);

    // Geometric: failures before the first success, success probability p.
    long long geometric(double p);

    // Gamma(shape, scale), Marsaglia-Tsang.
    double gamma(double shape, double scale);

    // Beta(a, b) from two gammas.
    double beta(double a, double b);

    // Index in [0, n) without modulo bias.
    std::size_t index(std::size_t n);

    // Samples an index from unnormalised weights.
    std::size_t discrete(const std::vector<double>& weights);

private:
    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace ppx
