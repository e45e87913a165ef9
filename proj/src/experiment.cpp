#include "ppx/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "ppx/cognet.hpp"
#include "ppx/count_distribution.hpp"
#include "ppx/errors.hpp"
#include "ppx/io.hpp"
#include "ppx/laplace.hpp"
#include "ppx/netsim.hpp"
#include "ppx/order.hpp"
#include "ppx/sampler.hpp"
#include "ppx/test_function.hpp"

namespace ppx {

namespace {

const std::vector<std::string> kRecipes = {"generate", "lf",      "ltorder",
                                           "coverage", "spatial", "cognitive"};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

nlohmann::json default_params(const std::string& recipe) {
    const Window unit_square = make_box(2, 0.0, 1.0);
    if (recipe == "generate" || recipe == "lf") {
        return {{"spec", ProcessSpec::stationary_poisson_spec(1.0)},
                {"window", unit_square}};
    }
    if (recipe == "ltorder") {
        return {{"laws",
                 {CountDistribution::negative_binomial_count(5.0, 0.5),
                  CountDistribution::poisson_count(5.0),
                  CountDistribution::binomial_count(50, 0.1)}},
                {"t_grid", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}}};
    }
    if (recipe == "coverage") {
        return {{"bs_spec", ProcessSpec::stationary_poisson_spec(0.1)},
                {"user_specs",
                 {ProcessSpec::stationary_poisson_spec(1.0),
                  ProcessSpec::mixed_poisson_spec({{0.5, 0.5}, {1.5, 0.5}})}},
                {"window", make_box(2, -10.0, 10.0, Metric::toroidal)},
                {"pathloss", PathLoss{}},
                {"fading", FadingModel{}},
                {"noise", 5e-5},
                {"thresholds_db", {-10.0, -7.0, -4.0, -1.0, 2.0, 5.0, 8.0, 11.0}}};
    }
    if (recipe == "spatial") {
        return {{"bs_specs",
                 {ProcessSpec::stationary_poisson_spec(0.1),
                  ProcessSpec::mixed_poisson_spec({{0.05, 0.5}, {0.15, 0.5}})}},
                {"window", make_box(2, -10.0, 10.0, Metric::toroidal)},
                {"radius", RadiusModel::fixed_radius(2.0)},
                {"footprint", "ball"},
                {"probe", {0.0, 0.0}},
                {"t_grid", {0.0, 0.25, 0.5, 0.75}}};
    }
    if (recipe == "cognitive") {
        return {{"config", CognitiveConfig{}},
                {"schemes",
                 {SelectionScheme::two_point_extreme_scheme(50, 5.0),
                  SelectionScheme::negative_binomial_scheme(50, 5.0),
                  SelectionScheme::poisson_scheme(50, 5.0),
                  SelectionScheme::bernoulli_scheme(50, 5.0),
                  SelectionScheme::fixed_scheme(50, 5.0)}},
                {"sir_grid_db",
                 {18.0, 20.0, 22.0, 24.0, 26.0, 28.0, 30.0, 32.0, 34.0, 36.0,
                  38.0, 40.0}},
                {"s_grid", {0.1, 1.0, 10.0}}};
    }
    throw SpecError("unknown recipe: " + recipe);
}

std::string order_csv_rows(const OrderReport& report) {
    std::string out;
    for (const OrderPoint& p : report.points) {
        out += csv_row({report.lhs_label, report.rhs_label, p.argument,
                        fmt_g12(p.lhs), fmt_g12(p.rhs), to_string(p.verdict),
                        to_string(report.overall)});
    }
    return out;
}

std::vector<NamedFile> run_generate(const ExperimentManifest& m) {
    const ProcessSpec spec = m.params.at("spec").get<ProcessSpec>();
    const Window window = m.params.at("window").get<Window>();
    const PointPattern pattern = sample(spec, window, m.seed);

    std::string csv = window.dim == 1 ? "x" : window.dim == 2 ? "x,y" : "x,y,z";
    csv += "\n";
    for (const Point& p : pattern.points) {
        std::vector<std::string> cells;
        for (int axis = 0; axis < window.dim; ++axis) {
            cells.push_back(fmt_g12(p[axis]));
        }
        csv += csv_row(cells);
    }

    nlohmann::json sidecar = {{"spec", spec},
                              {"window", window},
                              {"seed", m.seed},
                              {"count", pattern.points.size()}};
    return {{m.name + "_pattern.csv", csv},
            {m.name + "_pattern.json", sidecar.dump(2) + "\n"}};
}

std::vector<NamedFile> run_lf(const ExperimentManifest& m) {
    const ProcessSpec spec = m.params.at("spec").get<ProcessSpec>();
    const Window window = m.params.at("window").get<Window>();
    const std::vector<TestFunction> family = default_family(window);
    const std::vector<LfEstimate> est =
        lf_mc_family(spec, window, family, m.reps, m.seed);

    std::string csv = "function,estimate,se,exact\n";
    for (std::size_t k = 0; k < family.size(); ++k) {
        const std::string exact =
            lf_exact_available(spec, window)
                ? fmt_g12(lf_exact(spec, window, family[k]))
                : "";
        csv += csv_row({family[k].describe(), fmt_g12(est[k].mean),
                        fmt_g12(est[k].std_error), exact});
    }
    return {{m.name + "_lf.csv", csv}};
}

std::vector<NamedFile> run_ltorder(const ExperimentManifest& m) {
    const auto laws =
        m.params.at("laws").get<std::vector<CountDistribution>>();
    const auto t_grid = m.params.at("t_grid").get<std::vector<double>>();
    if (laws.size() < 2) throw SpecError("ltorder needs at least two laws");

    std::string csv = "lhs,rhs,argument,lhs_value,rhs_value,verdict,overall\n";
    for (std::size_t i = 0; i + 1 < laws.size(); ++i) {
        OrderReport report = lt_order_check(laws[i], laws[i + 1], t_grid);
        nlohmann::json lhs = laws[i];
        nlohmann::json rhs = laws[i + 1];
        report.lhs_label = lhs.at("kind").get<std::string>();
        report.rhs_label = rhs.at("kind").get<std::string>();
        csv += order_csv_rows(report);
    }
    return {{m.name + "_ltorder.csv", csv}};
}

std::vector<NamedFile> run_coverage(const ExperimentManifest& m) {
    NetworkConfig config;
    config.bs_spec = m.params.at("bs_spec").get<ProcessSpec>();
    config.window = m.params.at("window").get<Window>();
    config.pathloss = m.params.at("pathloss").get<PathLoss>();
    config.fading = m.params.at("fading").get<FadingModel>();
    config.noise = m.params.at("noise").get<double>();
    const auto user_specs =
        m.params.at("user_specs").get<std::vector<ProcessSpec>>();
    const auto thresholds_db =
        m.params.at("thresholds_db").get<std::vector<double>>();
    std::vector<double> thresholds;
    thresholds.reserve(thresholds_db.size());
    for (double db : thresholds_db) thresholds.push_back(db_to_linear(db));

    std::string csv = "users,threshold_db,threshold,estimator,mean,se\n";
    for (const ProcessSpec& users : user_specs) {
        config.ms_spec = users;
        // One seed for every user spec: the station geometry is shared, so
        // the columns differ only through the user process.
        const std::vector<CoveragePoint> curve =
            total_cell_coverage(config, thresholds, m.reps, m.seed);
        for (std::size_t k = 0; k < curve.size(); ++k) {
            csv += csv_row({users.id(), fmt_g12(thresholds_db[k]),
                            fmt_g12(curve[k].threshold), "indicator",
                            fmt_g12(curve[k].indicator.mean),
                            fmt_g12(curve[k].indicator.std_error)});
            csv += csv_row({users.id(), fmt_g12(thresholds_db[k]),
                            fmt_g12(curve[k].threshold), "conditional",
                            fmt_g12(curve[k].conditional.mean),
                            fmt_g12(curve[k].conditional.std_error)});
        }
    }
    return {{m.name + "_coverage.csv", csv}};
}

std::vector<NamedFile> run_spatial(const ExperimentManifest& m) {
    const auto bs_specs = m.params.at("bs_specs").get<std::vector<ProcessSpec>>();
    const Window window = m.params.at("window").get<Window>();
    const RadiusModel radius = m.params.at("radius").get<RadiusModel>();
    const Footprint footprint =
        footprint_from_string(m.params.at("footprint").get<std::string>());
    const auto probe_coords = m.params.at("probe").get<std::vector<double>>();
    if (static_cast<int>(probe_coords.size()) != window.dim) {
        throw SpecError("probe must have one coordinate per window axis");
    }
    Point probe;
    for (std::size_t axis = 0; axis < probe_coords.size(); ++axis) {
        probe[axis] = probe_coords[axis];
    }
    const auto t_grid = m.params.at("t_grid").get<std::vector<double>>();

    std::string csv = "stations,quantity,argument,mean,se\n";
    for (const ProcessSpec& spec : bs_specs) {
        const SpatialCoverage cov = spatial_coverage(
            spec, window, radius, footprint, probe, t_grid, m.reps, m.seed);
        csv += csv_row({spec.id(), "covered", "", fmt_g12(cov.p_covered.mean),
                        fmt_g12(cov.p_covered.std_error)});
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            csv += csv_row({spec.id(), "pgf", "t=" + fmt_g12(t_grid[j]),
                            fmt_g12(cov.pgf[j].mean),
                            fmt_g12(cov.pgf[j].std_error)});
        }
    }
    return {{m.name + "_spatial.csv", csv}};
}

std::vector<NamedFile> run_cognitive(const ExperimentManifest& m) {
    const CognitiveConfig config = m.params.at("config").get<CognitiveConfig>();
    const auto schemes =
        m.params.at("schemes").get<std::vector<SelectionScheme>>();
    const auto sir_grid_db =
        m.params.at("sir_grid_db").get<std::vector<double>>();
    std::vector<double> sir_grid;
    sir_grid.reserve(sir_grid_db.size());
    for (double db : sir_grid_db) sir_grid.push_back(db_to_linear(db));

    const SirStudy study =
        pu_sir_study(schemes, config, sir_grid, m.reps, m.seed);

    std::string sir_csv = "scheme,sir_db,sir,ccdf,ccdf_se,ccdf_raw,ccdf_raw_se\n";
    for (const SirCurve& curve : study.curves) {
        for (std::size_t k = 0; k < curve.grid.size(); ++k) {
            sir_csv += csv_row({curve.scheme, fmt_g12(sir_grid_db[k]),
                                fmt_g12(curve.grid[k]),
                                fmt_g12(curve.ccdf[k].mean),
                                fmt_g12(curve.ccdf[k].std_error),
                                fmt_g12(curve.ccdf_raw[k].mean),
                                fmt_g12(curve.ccdf_raw[k].std_error)});
        }
    }

    std::string order_csv = "lhs,rhs,argument,lhs_value,rhs_value,verdict,overall\n";
    for (const OrderReport& report : study.pairwise) {
        order_csv += order_csv_rows(report);
    }

    std::string summary_csv =
        "scheme,mean_interference,interference_se,analytic_interference,"
        "mean_rate,rate_se,redraws_per_draw\n";
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const SchemeSummary s = scheme_summary(
            schemes[i], config, m.reps,
            mix_seed(m.seed, 100 + static_cast<std::uint64_t>(i)));
        summary_csv += csv_row({s.scheme, fmt_g12(s.mean_interference.mean),
                                fmt_g12(s.mean_interference.std_error),
                                fmt_g12(s.analytic_interference),
                                fmt_g12(s.mean_rate.mean),
                                fmt_g12(s.mean_rate.std_error),
                                fmt_g12(s.redraws_per_draw.mean)});
    }

    return {{m.name + "_sir.csv", sir_csv},
            {m.name + "_order.csv", order_csv},
            {m.name + "_summary.csv", summary_csv}};
}

}  // namespace

void ExperimentManifest::validate() const {
    if (name.empty()) throw SpecError("manifest name must be non-empty");
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        if (!ok) {
            throw SpecError(
                "manifest name may contain letters, digits, '-' and '_' only");
        }
    }
    if (std::find(kRecipes.begin(), kRecipes.end(), recipe) == kRecipes.end()) {
        throw SpecError("unknown recipe: " + recipe);
    }
    if (reps < 2) throw SpecError("manifest reps must be >= 2");
    if (!params.is_object()) throw SpecError("manifest params must be an object");
}

ExperimentManifest manifest_from_json(const nlohmann::json& j,
                                      const std::string& recipe) {
    if (!j.is_object()) throw SpecError("manifest must be a JSON object");
    ExperimentManifest m;
    m.name = j.value("name", std::string("experiment"));
    const std::string from_file = j.value("recipe", std::string(""));
    if (!recipe.empty() && !from_file.empty() && recipe != from_file) {
        throw SpecError("manifest recipe '" + from_file +
                        "' does not match the requested '" + recipe + "'");
    }
    m.recipe = from_file.empty() ? recipe : from_file;
    if (m.recipe.empty()) throw SpecError("manifest needs a recipe");
    m.seed = j.value("seed", std::uint64_t{1});
    m.reps = j.value("reps", static_cast<long long>(2000));
    m.params = default_params(m.recipe);
    if (j.contains("params")) {
        if (!j.at("params").is_object()) {
            throw SpecError("manifest params must be an object");
        }
        m.params.merge_patch(j.at("params"));
    }
    m.validate();
    return m;
}

nlohmann::json manifest_to_json(const ExperimentManifest& m) {
    return {{"name", m.name},
            {"recipe", m.recipe},
            {"seed", m.seed},
            {"reps", m.reps},
            {"params", m.params}};
}

nlohmann::json recipe_defaults(const std::string& recipe) {
    return default_params(recipe);
}

std::vector<std::string> recipe_names() { return kRecipes; }

std::vector<NamedFile> run_recipe(const ExperimentManifest& m) {
    m.validate();
    std::vector<NamedFile> files;
    files.push_back(
        {m.name + "_manifest.json", manifest_to_json(m).dump(2) + "\n"});
    std::vector<NamedFile> produced;
    if (m.recipe == "generate") {
        produced = run_generate(m);
    } else if (m.recipe == "lf") {
        produced = run_lf(m);
    } else if (m.recipe == "ltorder") {
        produced = run_ltorder(m);
    } else if (m.recipe == "coverage") {
        produced = run_coverage(m);
    } else if (m.recipe == "spatial") {
        produced = run_spatial(m);
    } else if (m.recipe == "cognitive") {
        produced = run_cognitive(m);
    } else {
        throw SpecError("unknown recipe: " + m.recipe);
    }
    files.insert(files.end(), produced.begin(), produced.end());
    return files;
}

}  // namespace ppx
