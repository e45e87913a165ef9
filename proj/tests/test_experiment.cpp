#include "ppx/experiment.hpp"

#include <algorithm>

#include "doctest.h"
#include "ppx/errors.hpp"
#include "ppx/parallel.hpp"

using namespace ppx;

TEST_CASE("recipe catalogue") {
    const auto names = recipe_names();
    for (const char* expected :
         {"generate", "lf", "ltorder", "coverage", "spatial", "cognitive"}) {
        CHECK(std::find(names.begin(), names.end(), expected) != names.end());
    }
    CHECK_THROWS_AS(recipe_defaults("no-such-recipe"), SpecError);
    CHECK(recipe_defaults("generate").is_object());
}

TEST_CASE("manifests materialize defaults and keep overrides") {
    nlohmann::json j = {{"recipe", "ltorder"}, {"seed", 9}, {"reps", 100}};
    const ExperimentManifest m = manifest_from_json(j);
    CHECK(m.name == "experiment");
    CHECK(m.recipe == "ltorder");
    CHECK(m.seed == 9);
    CHECK(m.reps == 100);
    // Unset params arrive from the recipe defaults.
    CHECK(m.params.contains("laws"));
    CHECK(m.params.contains("t_grid"));

    nlohmann::json o = {{"recipe", "ltorder"}, {"params", {{"t_grid", {0.5}}}}};
    const ExperimentManifest with_override = manifest_from_json(o);
    CHECK(with_override.params.at("t_grid") == nlohmann::json({0.5}));
    CHECK(with_override.params.contains("laws"));
}

TEST_CASE("manifest parsing rejects bad input") {
    CHECK_THROWS_AS(manifest_from_json(nlohmann::json::object()), SpecError);
    // File says one recipe, caller asked for another.
    nlohmann::json j = {{"recipe", "lf"}};
    CHECK_THROWS_AS(manifest_from_json(j, "spatial"), SpecError);
    // The argument fills in a missing recipe field.
    CHECK(manifest_from_json(nlohmann::json::object(), "lf").recipe == "lf");

    nlohmann::json bad_name = {{"recipe", "lf"}, {"name", "has space"}};
    CHECK_THROWS_AS(manifest_from_json(bad_name), SpecError);
    nlohmann::json bad_reps = {{"recipe", "lf"}, {"reps", 1}};
    CHECK_THROWS_AS(manifest_from_json(bad_reps), SpecError);
}

TEST_CASE("manifests round-trip through JSON") {
    nlohmann::json j = {{"recipe", "spatial"}, {"name", "probe-run"},
                        {"seed", 42}, {"reps", 64}};
    const ExperimentManifest m = manifest_from_json(j);
    const ExperimentManifest back = manifest_from_json(manifest_to_json(m));
    CHECK(back.name == m.name);
    CHECK(back.recipe == m.recipe);
    CHECK(back.seed == m.seed);
    CHECK(back.reps == m.reps);
    CHECK(back.params == m.params);
}

TEST_CASE("every recipe emits its resolved manifest first") {
    for (const std::string& recipe : recipe_names()) {
        ExperimentManifest m = manifest_from_json(
            {{"recipe", recipe}, {"name", "probe"}, {"reps", 50}});
        const auto files = run_recipe(m);
        REQUIRE(!files.empty());
        CHECK(files.front().name == "probe_manifest.json");
        const nlohmann::json echoed = nlohmann::json::parse(files.front().content);
        CHECK(echoed.at("recipe") == recipe);
        CHECK(echoed.at("reps") == 50);
        // Params arrive fully materialized in the echo.
        CHECK(echoed.at("params") == m.params);
        for (const NamedFile& f : files) {
            CHECK(f.name.rfind("probe_", 0) == 0);
            CHECK(!f.content.empty());
        }
    }
}

TEST_CASE("recipe outputs are byte-stable across runs and thread counts") {
    for (const std::string& recipe : recipe_names()) {
        ExperimentManifest m = manifest_from_json(
            {{"recipe", recipe}, {"name", "det"}, {"seed", 5}, {"reps", 50}});
        set_thread_count(1);
        const auto one = run_recipe(m);
        const auto again = run_recipe(m);
        set_thread_count(3);
        const auto three = run_recipe(m);
        set_thread_count(1);
        REQUIRE(one.size() == three.size());
        REQUIRE(one.size() == again.size());
        for (std::size_t i = 0; i < one.size(); ++i) {
            CHECK(one[i].name == three[i].name);
            CHECK(one[i].content == again[i].content);
            CHECK(one[i].content == three[i].content);
        }
    }
}
