#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermo/interval_map.hpp"
#include "thermo/potential.hpp"

namespace thermo {

// Carries every validation failure, not just the first.
struct ConfigError : std::runtime_error {
    std::vector<std::string> errors;
    explicit ConfigError(std::vector<std::string> errs)
        : std::runtime_error(errs.empty() ? "invalid config" : errs.front()),
          errors(std::move(errs)) {}
};

// A validated experiment description. Numeric parameters are checked against
// the target command's preconditions before any computation starts.
struct ExperimentConfig {
    std::string command;
    nlohmann::json map_spec;
    nlohmann::json potential_spec; // may be null for shrinking/lyapunov
    nlohmann::json psi_spec;       // scan / mixing second observable
    nlohmann::json psi2_spec;      // mixing only

    int depth = 12;
    int cells = 256;
    int max_period = 8;
    int grid = 256;
    int n_max = 10;
    int max_word_len = 6;
    int time_budget = 8;
    long max_iterations = 100000;
    std::size_t budget = 0; // 0: module default
    double x0 = std::numeric_limits<double>::quiet_NaN();
    double center = 0.5;
    double rho = 0.1;
    double b0_lo = 0.0, b0_hi = 1.0;
    std::vector<int> times;
    // explicit IMFS elements (time + pull-back interval), bypassing the search
    struct ElementSpec {
        int time;
        double lo, hi;
    };
    std::vector<ElementSpec> elements;
    std::vector<double> t_grid;
    std::optional<double> c_star, c0, alpha, beta; // distortion constant inputs
    std::optional<double> target_integral, slack_d;

    std::string output_path; // empty: stdout
    std::string format; // csv | json; empty picks the command's natural format
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config(const nlohmann::json& j);

IntervalMap map_from_spec(const nlohmann::json& spec);
Potential potential_from_spec(const nlohmann::json& spec, const IntervalMap& map);

} // namespace thermo
