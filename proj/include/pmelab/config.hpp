#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pmelab/experiments.hpp"

namespace pmelab {

/// Malformed or out-of-range configuration; field() is "section.key".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct InitialConfig {
    std::string kind = "bump";  // bump | plateau | custom
    double K = 1.0;
    double r_inner = 0.5;
    double r_outer = 1.0;
    std::vector<double> r;  // custom table
    std::vector<double> u;

    bool operator==(const InitialConfig&) const = default;
};

/// Everything one config file describes: a scenario, the experiments to run
/// on it and their thresholds.
struct ScenarioConfig {
    std::string id = "bump";
    double m = 3.0;
    int N = 3;
    InitialConfig initial;
    double log_r_min = -6.0;
    double log_r_max = 4.0;
    std::size_t n = 8192;
    double t_start = 1.0;  // first snapshot
    double t_end = 200.0;
    int per_decade = 10;
    double cfl = 0.9;
    BoundaryCondition inner = BoundaryCondition::neumann_zero();
    BoundaryCondition outer = BoundaryCondition::neumann_zero();
    double leakage_threshold = 1e-6;
    std::vector<std::string> experiments;
    std::string output_dir = ".";

    Theorem1Options theorem1;
    Theorem1bOptions theorem1b;
    Theorem2Options theorem2;
    Theorem3Options theorem3;
    DecayOptions decay;
    ViscosityOptions viscosity;
    EntropyOptions entropy;

    bool operator==(const ScenarioConfig&) const = default;

    /// Builds the solver scenario; throws ConfigError naming the bad field.
    Scenario scenario() const;
};

/// Experiment names accepted in configs and on the command line.
const std::vector<std::string>& experiment_names();

/// Built-in config for an experiment: Bump data for theorem1, theorem1b,
/// theorem3, decay, entropy and viscosity; K = 1 plateau data for theorem2.
ScenarioConfig default_config(const std::string& experiment);

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
std::string emit_config(const ScenarioConfig& config);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace pmelab
