#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "impref/geometry.hpp"

namespace impref {

enum ExitCode : int { ExitPass = 0, ExitInvariantFailure = 1, ExitInconclusive = 2, ExitInputError = 3 };

/// Settings from the command line; each one, when given, replaces the scenario value.
struct RunOverrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    double tolerance_scale = 1.0;
    int jobs = 1;
    bool flip_kernel_sign = false;  // test hook for the harmonic suites
};

/// One scenario file after defaults are merged and overrides applied. `config` holds every
/// field explicitly; tolerances are already multiplied by the tolerance scale.
struct Scenario {
    std::string command;  // verify-harmonic | verify-helmholtz | solve | compare | plan-path
    std::filesystem::path source;
    std::filesystem::path out;
    std::uint64_t seed = 0;
    std::vector<Polygon> geometry;  // loaded from config["geometry"], paths relative to the scenario file
    nlohmann::json config;
};

/// Reads, expands and validates. Throws InputError naming the offending field.
Scenario load_scenario(const std::filesystem::path& file, const RunOverrides& overrides = {});
Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir,
                            const RunOverrides& overrides = {});

/// Defaults for a command, as merged by load_scenario.
nlohmann::json scenario_defaults(const std::string& command);

struct CommandReport {
    int exit_code = ExitPass;
    std::string failing;     // name of the first failing invariant, if any
    nlohmann::json summary;  // written to <out>/report.json
};

/// Runs the scenario's command, writes report.json and the CSV artifacts under scenario.out
/// and a one-line verdict per suite to log. Input errors met while running are reported
/// with ExitInputError.
CommandReport run_scenario(const Scenario& scenario, std::ostream& log);

}  // namespace impref
