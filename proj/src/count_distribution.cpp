#include "ppx/count_distribution.hpp"

#include <cmath>
#include <string>

#include "ppx/errors.hpp"

namespace ppx {

namespace {

std::string kind_name(CountDistribution::Kind kind) {
    switch (kind) {
        case CountDistribution::Kind::fixed: return "fixed";
        case CountDistribution::Kind::binomial: return "binomial";
        case CountDistribution::Kind::poisson: return "poisson";
        case CountDistribution::Kind::negative_binomial: return "negative_binomial";
        case CountDistribution::Kind::two_point: return "two_point";
        case CountDistribution::Kind::empirical: return "empirical";
    }
    throw SpecError("unreachable count kind");
}

CountDistribution::Kind kind_from_name(const std::string& name) {
    if (name == "fixed") return CountDistribution::Kind::fixed;
    if (name == "binomial") return CountDistribution::Kind::binomial;
    if (name == "poisson") return CountDistribution::Kind::poisson;
    if (name == "negative_binomial") return CountDistribution::Kind::negative_binomial;
    if (name == "two_point") return CountDistribution::Kind::two_point;
    if (name == "empirical") return CountDistribution::Kind::empirical;
    throw SpecError("unknown count distribution kind: " + name);
}

// t^k for integer k >= 0 with the count-law convention 0^0 = 1.
double int_pow(double t, long long k) {
    if (k == 0) return 1.0;
    if (t == 0.0) return 0.0;
    return std::pow(t, static_cast<double>(k));
}

}  // namespace

CountDistribution CountDistribution::fixed_count(long long n) {
    CountDistribution d;
    d.kind = Kind::fixed;
    d.n = n;
    d.validate();
    return d;
}

CountDistribution CountDistribution::binomial_count(long long L, double p) {
    CountDistribution d;
    d.kind = Kind::binomial;
    d.L = L;
    d.p = p;
    d.validate();
    return d;
}

CountDistribution CountDistribution::poisson_count(double mu) {
    CountDistribution d;
    d.kind = Kind::poisson;
    d.mu = mu;
    d.validate();
    return d;
}

CountDistribution CountDistribution::negative_binomial_count(double r, double p) {
    CountDistribution d;
    d.kind = Kind::negative_binomial;
    d.r = r;
    d.p = p;
    d.validate();
    return d;
}

CountDistribution CountDistribution::two_point_count(long long v0, long long v1, double q) {
    CountDistribution d;
    d.kind = Kind::two_point;
    d.v0 = v0;
    d.v1 = v1;
    d.q = q;
    d.validate();
    return d;
}

CountDistribution CountDistribution::empirical_count(std::vector<double> pmf) {
    CountDistribution d;
    d.kind = Kind::empirical;
    d.pmf = std::move(pmf);
    d.validate();
    return d;
}

void CountDistribution::validate() const {
    switch (kind) {
        case Kind::fixed:
            if (n < 0) throw SpecError("fixed count must be >= 0");
            return;
        case Kind::binomial:
            if (L < 0) throw SpecError("binomial L must be >= 0");
            if (p < 0.0 || p > 1.0) throw SpecError("binomial p must be in [0, 1]");
            return;
        case Kind::poisson:
            if (mu < 0.0 || !std::isfinite(mu)) {
                throw SpecError("poisson mu must be finite and >= 0");
            }
            return;
        case Kind::negative_binomial:
            if (r <= 0.0 || !std::isfinite(r)) {
                throw SpecError("negative_binomial r must be finite and > 0");
            }
            if (p <= 0.0 || p > 1.0) {
                throw SpecError("negative_binomial p must be in (0, 1]");
            }
            return;
        case Kind::two_point:
            if (v0 < 0 || v1 < 0) throw SpecError("two_point values must be >= 0");
            if (q < 0.0 || q > 1.0) throw SpecError("two_point q must be in [0, 1]");
            return;
        case Kind::empirical: {
            if (pmf.empty()) throw SpecError("empirical pmf must not be empty");
            double total = 0.0;
            for (double prob : pmf) {
                if (prob < 0.0 || !std::isfinite(prob)) {
                    throw SpecError("empirical pmf entries must be finite and >= 0");
                }
                total += prob;
            }
            if (std::abs(total - 1.0) > 1e-9) {
                throw SpecError("empirical pmf must sum to 1");
            }
            return;
        }
    }
    throw SpecError("unreachable count kind");
}

double CountDistribution::mean() const {
    switch (kind) {
        case Kind::fixed: return static_cast<double>(n);
        case Kind::binomial: return static_cast<double>(L) * p;
        case Kind::poisson: return mu;
        case Kind::negative_binomial: return r * (1.0 - p) / p;
        case Kind::two_point:
            return q * static_cast<double>(v0) + (1.0 - q) * static_cast<double>(v1);
        case Kind::empirical: {
            double m = 0.0;
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                m += static_cast<double>(k) * pmf[k];
            }
            return m;
        }
    }
    throw SpecError("unreachable count kind");
}

double CountDistribution::variance() const {
    switch (kind) {
        case Kind::fixed: return 0.0;
        case Kind::binomial: return static_cast<double>(L) * p * (1.0 - p);
        case Kind::poisson: return mu;
        case Kind::negative_binomial: return r * (1.0 - p) / (p * p);
        case Kind::two_point: {
            const double m = mean();
            const double d0 = static_cast<double>(v0) - m;
            const double d1 = static_cast<double>(v1) - m;
            return q * d0 * d0 + (1.0 - q) * d1 * d1;
        }
        case Kind::empirical: {
            const double m = mean();
            double v = 0.0;
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                const double d = static_cast<double>(k) - m;
                v += d * d * pmf[k];
            }
            return v;
        }
    }
    throw SpecError("unreachable count kind");
}

double CountDistribution::pgf(double t) const {
    if (t < 0.0 || t > 1.0) throw SpecError("pgf argument must be in [0, 1]");
    switch (kind) {
        case Kind::fixed:
            return int_pow(t, n);
        case Kind::binomial:
            return int_pow(1.0 - p + p * t, L);
        case Kind::poisson:
            return std::exp(-mu * (1.0 - t));
        case Kind::negative_binomial:
            // Failures before the r-th success: (p / (1 - (1-p) t))^r.
            return std::pow(p / (1.0 - (1.0 - p) * t), r);
        case Kind::two_point:
            return q * int_pow(t, v0) + (1.0 - q) * int_pow(t, v1);
        case Kind::empirical: {
            double total = 0.0;
            double power = 1.0;
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                total += pmf[k] * power;
                power *= t;
            }
            return total;
        }
    }
    throw SpecError("unreachable count kind");
}

long long CountDistribution::sample(Rng& rng) const {
    switch (kind) {
        case Kind::fixed: return n;
        case Kind::binomial: return rng.binomial(L, p);
        case Kind::poisson: return rng.poisson(mu);
        case Kind::negative_binomial: return rng.negative_binomial(r, p);
        case Kind::two_point: return rng.bernoulli(q) ? v0 : v1;
        case Kind::empirical:
            return static_cast<long long>(rng.discrete(pmf));
    }
    throw SpecError("unreachable count kind");
}

void to_json(nlohmann::json& j, const CountDistribution& d) {
    j = {{"kind", kind_name(d.kind)}};
    switch (d.kind) {
        case CountDistribution::Kind::fixed:
            j["n"] = d.n;
            return;
        case CountDistribution::Kind::binomial:
            j["L"] = d.L;
            j["p"] = d.p;
            return;
        case CountDistribution::Kind::poisson:
            j["mu"] = d.mu;
            return;
        case CountDistribution::Kind::negative_binomial:
            j["r"] = d.r;
            j["p"] = d.p;
            return;
        case CountDistribution::Kind::two_point:
            j["v0"] = d.v0;
            j["v1"] = d.v1;
            j["q"] = d.q;
            return;
        case CountDistribution::Kind::empirical:
            j["pmf"] = d.pmf;
            return;
    }
}

void from_json(const nlohmann::json& j, CountDistribution& d) {
    d = CountDistribution{};
    d.kind = kind_from_name(j.at("kind").get<std::string>());
    switch (d.kind) {
        case CountDistribution::Kind::fixed:
            d.n = j.at("n").get<long long>();
            break;
        case CountDistribution::Kind::binomial:
            d.L = j.at("L").get<long long>();
            d.p = j.at("p").get<double>();
            break;
        case CountDistribution::Kind::poisson:
            d.mu = j.at("mu").get<double>();
            break;
        case CountDistribution::Kind::negative_binomial:
            d.r = j.at("r").get<double>();
            d.p = j.at("p").get<double>();
            break;
        case CountDistribution::Kind::two_point:
            d.v0 = j.at("v0").get<long long>();
            d.v1 = j.at("v1").get<long long>();
            d.q = j.at("q").get<double>();
            break;
        case CountDistribution::Kind::empirical:
            d.pmf = j.at("pmf").get<std::vector<double>>();
            break;
    }
    d.validate();
}

}  // namespace ppx
