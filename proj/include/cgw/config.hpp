#pragma once

#include "cgw/solver.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cgw {

using json = nlohmann::ordered_json;

// Subset of TOML: tables, key = value, strings, numbers, booleans, arrays and
// inline tables. Throws ConfigError with "line N" as the field.
json parse_toml(const std::string& text);

// JSON when the file name ends in .json or the text starts with '{', TOML otherwise.
json load_config_file(const std::string& path);

struct CliOverrides {
    std::optional<std::string> command;
    std::optional<std::string> config;
    std::optional<double> varpi, sigma, g, tol;
    std::optional<std::string> out;
};

struct RunConfig {
    std::string command;
    PhysicalParams params;
    SolverSettings solver;
    std::optional<double> varpi;
    std::vector<double> varpi_grid;
    std::optional<double> fixed_c1;
    VorticityModel model;
    json model_spec;
    std::string out = "out";
    std::string input;             // verify-identities: directory holding a wave state
    std::vector<double> radii;     // verify-fields
    std::optional<std::array<double, 3>> direction;
    bool angular = true;
    std::optional<std::array<double, 2>> tail_window;
    json effective;                // echo of the validated config
};

// Applies overrides (flags win over file values), fills defaults, validates.
RunConfig build_config(json doc, const CliOverrides& cli);
RunConfig parse_config(const CliOverrides& cli);

VorticityModel model_from_json(const json& spec, const std::string& path);
json model_to_json(const VorticityModel& m);

} // namespace cgw
