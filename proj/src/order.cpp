#include "ppx/order.hpp"

#include <cmath>

#include "ppx/errors.hpp"
#include "ppx/io.hpp"
#include "ppx/rng.hpp"

namespace ppx {

namespace {
constexpr std::uint64_t kOrderLhs = 0x05D1'0001;
constexpr std::uint64_t kOrderRhs = 0x05D1'0002;
}  // namespace

std::string to_string(PointVerdict v) {
    switch (v) {
        case PointVerdict::ordered: return "ordered";
        case PointVerdict::reversed: return "reversed";
        case PointVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(OverallVerdict v) {
    switch (v) {
        case OverallVerdict::ordered: return "ordered";
        case OverallVerdict::ordered_degenerate: return "ordered-degenerate";
        case OverallVerdict::reversed: return "reversed";
        case OverallVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

PointVerdict classify_point(double lhs, double lhs_se, double rhs, double rhs_se,
                            double z) {
    const double diff = lhs - rhs;
    const double se = std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se);
    if (se == 0.0) {
        // Exact comparison: any strict difference is decisive.
        if (diff > 0.0) return PointVerdict::ordered;
        if (diff < 0.0) return PointVerdict::reversed;
        return PointVerdict::inconclusive;
    }
    if (diff > z * se) return PointVerdict::ordered;
    if (diff < -z * se) return PointVerdict::reversed;
    return PointVerdict::inconclusive;
}

void OrderReport::finalize() {
    if (points.empty()) throw SpecError("order report needs a non-empty grid");
    bool any_reversed = false;
    bool any_ordered = false;
    bool undecided_consistent = true;
    for (OrderPoint& p : points) {
        p.verdict = classify_point(p.lhs, p.lhs_se, p.rhs, p.rhs_se, z);
        switch (p.verdict) {
            case PointVerdict::reversed:
                any_reversed = true;
                break;
            case PointVerdict::ordered:
                any_ordered = true;
                break;
            case PointVerdict::inconclusive:
                if (p.lhs - p.rhs < 0.0) undecided_consistent = false;
                break;
        }
    }
    if (any_reversed) {
        overall = OverallVerdict::reversed;
    } else if (!any_ordered) {
        overall = OverallVerdict::ordered_degenerate;
    } else if (undecided_consistent) {
        overall = OverallVerdict::ordered;
    } else {
        overall = OverallVerdict::inconclusive;
    }
}

std::string OrderReport::to_csv() const {
    std::string out = "argument,lhs_mean,lhs_se,rhs_mean,rhs_se,verdict\n";
    for (const OrderPoint& p : points) {
        out += csv_row({p.argument, fmt_g12(p.lhs), fmt_g12(p.lhs_se),
                        fmt_g12(p.rhs), fmt_g12(p.rhs_se),
                        to_string(p.verdict)});
    }
    return out;
}

OrderReport lt_order_check(const CountDistribution& d1,
                           const CountDistribution& d2,
                           const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw SpecError("lt_order_check needs a non-empty grid");
    d1.validate();
    d2.validate();
    OrderReport report;
    report.lhs_label = "d1";
    report.rhs_label = "d2";
    for (double t : t_grid) {
        if (t <= 0.0 || t >= 1.0) {
            throw SpecError("lt_order_check grid must lie in (0, 1)");
        }
        OrderPoint p;
        p.argument = "t=" + fmt_g12(t);
        p.lhs = d1.pgf(t);
        p.rhs = d2.pgf(t);
        report.points.push_back(p);
    }
    report.finalize();
    return report;
}

OrderReport lt_order_check_laws(const IntensityLaw& law1,
                                const IntensityLaw& law2,
                                const std::vector<double>& s_grid) {
    if (s_grid.empty()) throw SpecError("lt_order_check needs a non-empty grid");
    law1.validate();
    law2.validate();
    OrderReport report;
    report.lhs_label = "law1";
    report.rhs_label = "law2";
    for (double s : s_grid) {
        if (s <= 0.0) {
            throw SpecError("laplace transform grid must be positive");
        }
        OrderPoint p;
        p.argument = "s=" + fmt_g12(s);
        p.lhs = law1.laplace(s);
        p.rhs = law2.laplace(s);
        report.points.push_back(p);
    }
    report.finalize();
    return report;
}

OrderReport lf_order_check_gens(const PatternGen& gen1, const std::string& label1,
                                const PatternGen& gen2, const std::string& label2,
                                const std::vector<TestFunction>& family,
                                long long reps, std::uint64_t seed, double z) {
    if (family.empty()) throw SpecError("lf_order_check needs a non-empty family");
    const std::vector<LfEstimate> lhs =
        lf_mc_family(gen1, family, reps, mix_seed(seed, kOrderLhs));
    const std::vector<LfEstimate> rhs =
        lf_mc_family(gen2, family, reps, mix_seed(seed, kOrderRhs));
    OrderReport report;
    report.lhs_label = label1;
    report.rhs_label = label2;
    report.z = z;
    for (std::size_t k = 0; k < family.size(); ++k) {
        OrderPoint p;
        p.argument = family[k].describe();
        p.lhs = lhs[k].mean;
        p.lhs_se = lhs[k].std_error;
        p.rhs = rhs[k].mean;
        p.rhs_se = rhs[k].std_error;
        report.points.push_back(p);
    }
    report.finalize();
    return report;
}

OrderReport lf_order_check(const ProcessSpec& spec1, const ProcessSpec& spec2,
                           const Window& window,
                           const std::vector<TestFunction>& family,
                           long long reps, std::uint64_t seed, double z) {
    return lf_order_check_gens(spec_generator(spec1, window), spec1.id(),
                               spec_generator(spec2, window), spec2.id(), family,
                               reps, seed, z);
}

OrderReport order_report_from_estimates(const std::string& lhs_label,
                                        const std::string& rhs_label,
                                        const std::vector<std::string>& arguments,
                                        const std::vector<McEstimate>& lhs,
                                        const std::vector<McEstimate>& rhs,
                                        double z) {
    if (arguments.size() != lhs.size() || arguments.size() != rhs.size()) {
        throw SpecError("order report columns must have equal lengths");
    }
    OrderReport report;
    report.lhs_label = lhs_label;
    report.rhs_label = rhs_label;
    report.z = z;
    for (std::size_t k = 0; k < arguments.size(); ++k) {
        OrderPoint p;
        p.argument = arguments[k];
        p.lhs = lhs[k].mean;
        p.lhs_se = lhs[k].std_error;
        p.rhs = rhs[k].mean;
        p.rhs_se = rhs[k].std_error;
        report.points.push_back(p);
    }
    report.finalize();
    return report;
}

void to_json(nlohmann::json& j, const OrderPoint& p) {
    j = {{"argument", p.argument}, {"lhs_mean", p.lhs},
         {"lhs_se", p.lhs_se},    {"rhs_mean", p.rhs},
         {"rhs_se", p.rhs_se},    {"verdict", to_string(p.verdict)}};
}

void to_json(nlohmann::json& j, const OrderReport& report) {
    j = {{"lhs", report.lhs_label},
         {"rhs", report.rhs_label},
         {"z", report.z},
         {"points", report.points},
         {"overall", to_string(report.overall)}};
}

}  // namespace ppx
