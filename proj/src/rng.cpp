#include "ppx/rng.hpp"

#include <cmath>
#include <limits>

#include "ppx/errors.hpp"

namespace ppx {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // Feed both words through SplitMix64 so that nearby (seed, stream) pairs
    // land far apart in state space.
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= 0x6C62'272E'07BB'0142ULL + stream;
    std::uint64_t b = splitmix64(state);
    state = a ^ rotl(b, 23) ^ (stream * 0x100000001B3ULL);
    return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Rng::uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

double Rng::normal(double mean, double sd) {
    return mean + sd * normal();
}

double Rng::exponential_mean(double mean) {
    return -mean * std::log(uniform_pos());
}

bool Rng::bernoulli(double p) {
    return uniform() < p;
}

long long Rng::poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean)) {
        throw SpecError("poisson mean must be finite and non-negative");
    }
    if (mean == 0.0) return 0;
    // Multiplicative method in chunks of 32: multiply uniforms until the
    // running product drops below exp(-mean); restarting the threshold every
    // chunk keeps the product away from underflow for any mean.
    constexpr double kChunk = 32.0;
    long long count = 0;
    double remaining = mean;
    while (remaining > kChunk) {
        const double threshold = std::exp(-kChunk);
        double prod = uniform_pos();
        while (prod >= threshold) {
            ++count;
            prod *= uniform_pos();
        }
        remaining -= kChunk;
    }
    const double threshold = std::exp(-remaining);
    double prod = uniform_pos();
    while (prod >= threshold) {
        ++count;
        prod *= uniform_pos();
    }
    return count;
}

long long Rng::binomial(long long n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) {
        throw SpecError("binomial requires n >= 0 and p in [0, 1]");
    }
    long long count = 0;
    for (long long i = 0; i < n; ++i) {
        if (uniform() < p) ++count;
    }
    return count;
}

long long Rng::geometric(double p) {
    if (p <= 0.0 || p > 1.0) {
        throw SpecError("geometric requires p in (0, 1]");
    }
    if (p == 1.0) return 0;
    // Inversion: floor(log(U) / log(1-p)).
    const double denom = std::log1p(-p);
    const double value = std::floor(std::log(uniform_pos()) / denom);
    if (value >= 9.0e18) throw NumericError("geometric sample overflow");
    return static_cast<long long>(value);
}

long long Rng::negative_binomial(double r, double p) {
    if (r <= 0.0 || p <= 0.0 || p > 1.0) {
        throw SpecError("negative binomial requires r > 0 and p in (0, 1]");
    }
    if (p == 1.0) return 0;
    const double r_rounded = std::round(r);
    if (std::abs(r - r_rounded) < 1e-12 && r_rounded < 1e6) {
        long long total = 0;
        const auto reps = static_cast<long long>(r_rounded);
        for (long long i = 0; i < reps; ++i) total += geometric(p);
        return total;
    }
    // Gamma-Poisson mixture: N | G ~ Poisson(G), G ~ Gamma(r, (1-p)/p).
    const double g = gamma(r, (1.0 - p) / p);
    return poisson(g);
}

double Rng::gamma(double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0) {
        throw SpecError("gamma requires shape > 0 and scale > 0");
    }
    if (shape < 1.0) {
        // Boost to shape+1 and correct with U^(1/shape).
        const double u = uniform_pos();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_pos();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v * scale;
        }
    }
}

double Rng::beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw SpecError("index(0) is undefined");
    // Rejection to avoid modulo bias.
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t value;
    do {
        value = next_u64();
    } while (value >= limit);
    return static_cast<std::size_t>(value % n);
}

std::size_t Rng::discrete(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw SpecError("discrete weights must be finite and non-negative");
        }
        total += w;
    }
    if (total <= 0.0) throw SpecError("discrete weights must not all be zero");
    const double target = uniform() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cumulative += weights[i];
        if (target < cumulative) return i;
    }
    return weights.size() - 1;
}

}  // namespace ppx
