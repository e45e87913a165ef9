#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppx/rng.hpp"

namespace ppx {

// Non-negative integer count law with exact PGF evaluation.  Drives replica
// counts, mixed-binomial totals, and user-selection schemes.
struct CountDistribution {
    enum class Kind {
        fixed,
        binomial,
        poisson,
        negative_binomial,
        two_point,
        empirical,
    };

    Kind kind = Kind::fixed;

    long long n = 0;          // fixed
    long long L = 0;          // binomial trials
    double p = 0.0;           // binomial / negative_binomial success prob
    double mu = 0.0;          // poisson mean
    double r = 0.0;           // negative_binomial successes
    long long v0 = 0;         // two_point values, P{v0} = q
    long long v1 = 0;
    double q = 0.0;
    std::vector<double> pmf;  // empirical, pmf[k] = P{k}

    static CountDistribution fixed_count(long long n);
    static CountDistribution binomial_count(long long L, double p);
    static CountDistribution poisson_count(double mu);
    static CountDistribution negative_binomial_count(double r, double p);
    static CountDistribution two_point_count(long long v0, long long v1, double q);
    static CountDistribution empirical_count(std::vector<double> pmf);

    void validate() const;

    double mean() const;
    double variance() const;

    // Exact E[t^N] for t in [0, 1].
    double pgf(double t) const;

    long long sample(Rng& rng) const;

    friend bool operator==(const CountDistribution&, const CountDistribution&) = default;
};

void to_json(nlohmann::json& j, const CountDistribution& d);
void from_json(const nlohmann::json& j, CountDistribution& d);

}  // namespace ppx
