#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lucas/model.hpp"
#include "lucas/numerics.hpp"

namespace lucas {

// One run request: model, endowment, grids, tolerances, output location, and an
// optional sweep block mapping a parameter name to the values to visit.
struct RunConfig {
    ModelParams params{};
    InitialEndowment endowment{};
    double horizon = 200.0;
    double output_step = 0.1;
    double compare_horizon = 50.0;
    ToleranceSettings tolerances{};
    std::string output_dir = ".";
    std::map<std::string, std::vector<double>> sweep;  // sorted: deterministic order
    std::optional<double> force_u0;  // debug hook, set from the command line only
};

// Parses the JSON text of a run configuration. Strict: unknown keys are
// rejected, required keys (the seven parameters plus k0 and h0) must be present,
// and grid/tolerance values must be positive. Throws ConfigError.
RunConfig parse_config(const std::string& json_text);

// Reads and parses a configuration file. Throws ConfigError when the file
// cannot be read or its content does not parse.
RunConfig load_config(const std::string& path);

}  // namespace lucas
