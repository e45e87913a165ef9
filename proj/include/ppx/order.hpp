#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppx/count_distribution.hpp"
#include "ppx/laplace.hpp"
#include "ppx/process_spec.hpp"
#include "ppx/test_function.hpp"

namespace ppx {

enum class PointVerdict { ordered, reversed, inconclusive };

// ordered: lhs dominates with at least one decisive point and no
// sign-inconsistent leftovers; ordered_degenerate: no decisive separation in
// either direction (covers exact equality); reversed: any decisive reversal;
// inconclusive: decisive points exist but undecided points lean the other
// way.
enum class OverallVerdict { ordered, ordered_degenerate, reversed, inconclusive };

std::string to_string(PointVerdict v);
std::string to_string(OverallVerdict v);

struct OrderPoint {
    std::string argument;  // test-function descriptor or grid value
    double lhs = 0.0;
    double lhs_se = 0.0;
    double rhs = 0.0;
    double rhs_se = 0.0;
    PointVerdict verdict = PointVerdict::inconclusive;
};

// Outcome of an order check over a grid of arguments.  The check asks
// whether lhs >= rhs across the grid (for Laplace-type quantities this means
// the lhs process is below the rhs process in the corresponding order).
struct OrderReport {
    std::string lhs_label;
    std::string rhs_label;
    double z = 2.0;
    std::vector<OrderPoint> points;
    OverallVerdict overall = OverallVerdict::inconclusive;

    // Fills per-point verdicts from the stored values and derives the
    // overall verdict.
    void finalize();

    std::string to_csv() const;
};

PointVerdict classify_point(double lhs, double lhs_se, double rhs, double rhs_se,
                            double z);

// Exact PGF dominance check on a grid in (0, 1): d1 is below d2 in the
// transform order iff pgf(d1, t) >= pgf(d2, t) there.
OrderReport lt_order_check(const CountDistribution& d1,
                           const CountDistribution& d2,
                           const std::vector<double>& t_grid);

// Same order question for continuous non-negative laws, via their exact
// Laplace transforms on a positive s-grid.
OrderReport lt_order_check_laws(const IntensityLaw& law1,
                                const IntensityLaw& law2,
                                const std::vector<double>& s_grid);

// Empirical LF order verdict: estimates L(u) for both processes over the
// family (independent seeds per side; no common random numbers) and compares
// with the z-rule.
OrderReport lf_order_check(const ProcessSpec& spec1, const ProcessSpec& spec2,
                           const Window& window,
                           const std::vector<TestFunction>& family,
                           long long reps, std::uint64_t seed, double z = 2.0);

// Generator variant for transformed processes.
OrderReport lf_order_check_gens(const PatternGen& gen1, const std::string& label1,
                                const PatternGen& gen2, const std::string& label2,
                                const std::vector<TestFunction>& family,
                                long long reps, std::uint64_t seed,
                                double z = 2.0);

// Assembles a finalized report from already-computed estimate columns.
// Arguments, lhs, and rhs must have equal lengths.
OrderReport order_report_from_estimates(const std::string& lhs_label,
                                        const std::string& rhs_label,
                                        const std::vector<std::string>& arguments,
                                        const std::vector<McEstimate>& lhs,
                                        const std::vector<McEstimate>& rhs,
                                        double z = 2.0);

void to_json(nlohmann::json& j, const OrderPoint& p);
void to_json(nlohmann::json& j, const OrderReport& report);

}  // namespace ppx
