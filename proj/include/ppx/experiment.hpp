#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ppx {

// A fully materialized experiment description.  Loading fills every omitted
// parameter with its declared default, so the resolved manifest is
// self-describing and re-running it reproduces the outputs byte-exactly.
struct ExperimentManifest {
    std::string name = "experiment";
    std::string recipe;
    std::uint64_t seed = 1;
    long long reps = 2000;
    nlohmann::json params = nlohmann::json::object();

    void validate() const;
};

// Parses a manifest and materializes recipe defaults into params.  The
// recipe argument fills in when the JSON has no "recipe" field; a non-empty
// JSON recipe must match it.
ExperimentManifest manifest_from_json(const nlohmann::json& j,
                                      const std::string& recipe = "");

nlohmann::json manifest_to_json(const ExperimentManifest& m);

// The default parameter block of one recipe.
nlohmann::json recipe_defaults(const std::string& recipe);

std::vector<std::string> recipe_names();

struct NamedFile {
    std::string name;
    std::string content;
};

// Runs the recipe and returns its output files (CSV, plus a JSON sidecar for
// pattern dumps).  Output bytes depend only on the manifest, never on the
// worker-thread count.
std::vector<NamedFile> run_recipe(const ExperimentManifest& m);

}  // namespace ppx
