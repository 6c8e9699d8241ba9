#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pmelab/core.hpp"
#include "pmelab/solver.hpp"

namespace pmelab {

struct SeriesPoint {
    double time;
    std::string functional;
    double value;
};

struct CriterionResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct FittedRate {
    double exponent = 0.0;
    double residual = 0.0;  // 1 - r^2 of the log-log fit
};

struct ExperimentReport {
    std::string scenario;
    Parameters params;
    std::vector<SeriesPoint> series;
    std::map<std::string, FittedRate> fitted_rates;
    std::map<std::string, double> constants;  // k, D, masses used by the experiment
    std::vector<std::string> warnings;
    std::vector<CriterionResult> criteria;

    void add(double time, const std::string& name, double value) { series.push_back({time, name, value}); }
    /// Values of one functional in insertion order, as (time, value).
    std::vector<std::pair<double, double>> values_of(const std::string& name) const;
    bool passed() const;
};

/// Radial initial data, grid and output times for one solver run of the 1D
/// equation (eps_diff = 1).
struct Scenario {
    std::string id;
    Parameters params;
    InitialCondition ic;
    RadialGrid grid;
    std::vector<double> times;  // physical snapshot times; the last one ends the run
    double cfl = 0.9;
    BoundaryCondition inner = BoundaryCondition::neumann_zero();
    BoundaryCondition outer = BoundaryCondition::neumann_zero();
    double leakage_threshold = 1e-6;
};

/// t0 * 10^{j/per_decade} up to t1, with t1 appended.
std::vector<double> log_times(double t0, double t1, int per_decade);

/// Bump data, m = N = 3, log r in [-6, 4], 10 snapshots per decade on [1, t_end].
Scenario bump_scenario(std::size_t n = 8192, double t_end = 200.0);

/// Plateau data of height K, m = N = 3, log r in [-200, 20].
Scenario plateau_scenario(double K = 1.0, std::size_t n = 8192, double t_end = 50.0);

RadialRun simulate(const Scenario& scenario);

/// omega1 * integral of r^{-1} u0 and of r^{N-3} u0 over the scenario grid by
/// adaptive quadrature of the initial data.
double initial_weighted_mass(const Scenario& scenario);
double initial_l12_mass(const Scenario& scenario);

// ----------------------------------------------------------------------------

struct Theorem1Options {
    /// e_p(t) = t^{(p-1)/(mp)} ||u - F||_{p,N} is recorded for each p, with
    /// the unrooted norm as "e_p<p>" and the rooted one as "e_p<p>_rooted".
    /// The trend gate uses p = 1, which is always recorded.
    std::vector<double> p_list{1.0, 2.0};
    double t_from = 1.0;
    double t_to = 200.0;
    double factor = 4.0;  // required e1(t_from)/e1(t_to)
    double k_tol = 1e-9;

    bool operator==(const Theorem1Options&) const = default;
};

struct Theorem1bOptions {
    double t_from = 1.0;
    double t_to = 200.0;
    double factor = 4.0;
    double y_lo = -0.5;
    double y_hi = 1.0;
    double bernstein_C = 1.0;
    double resolution = 0.0;  // Hausdorff point spacing, 0 for automatic

    bool operator==(const Theorem1bOptions&) const = default;
};

struct Theorem2Options {
    double K = 1.0;
    double R = 8.0;
    double t_from = 1.0;
    double t_to = 50.0;
    double factor = 4.0;
    double origin_tol = 1e-2;
    double monotone_tol = 1e-12;

    bool operator==(const Theorem2Options&) const = default;
};

struct Theorem3Options {
    double delta = 0.5;
    double region_exponent = 0.25;  // outer region r >= delta t^{region_exponent}
    double t_from = 1.0;
    double t_to = 100.0;
    double factor = 3.0;
    double D_tol = 1e-8;

    bool operator==(const Theorem3Options&) const = default;
};

struct DecayOptions {
    double band = 0.1;  // alpha within (1 +- band)/m

    bool operator==(const DecayOptions&) const = default;
};

struct ViscosityOptions {
    double K = 1.0;
    std::vector<double> lambdas{10.0, 100.0, 1000.0};
    double tau = 1.0;
    LineGrid window{-2.0, 5.0, 4096};
    double self_error_factor = 3.0;
    double cfl = 0.9;

    bool operator==(const ViscosityOptions&) const = default;
};

struct EntropyOptions {
    double C = 1.0;
    double tau_min = 0.1;

    bool operator==(const EntropyOptions&) const = default;
};

ExperimentReport experiment_theorem1(const Scenario& sc, const RadialRun& run, const Theorem1Options& opt = {});
ExperimentReport experiment_theorem1b(const Scenario& sc, const RadialRun& run, const Theorem1bOptions& opt = {});
ExperimentReport experiment_theorem2(const Scenario& sc, const RadialRun& run, const Theorem2Options& opt = {});
ExperimentReport experiment_theorem3(const Scenario& sc, const RadialRun& run, const Theorem3Options& opt = {});
ExperimentReport experiment_decay(const Scenario& sc, const RadialRun& run, const DecayOptions& opt = {});
ExperimentReport experiment_viscosity(const Parameters& params, const ViscosityOptions& opt = {});
ExperimentReport experiment_entropy(const Scenario& sc, const RadialRun& run, const EntropyOptions& opt = {});

/// Maximum of (w_{j+1}^{m-1} - w_j^{m-1})/ds over the line image of each
/// snapshot with tau >= tau_min, minus 1/(m tau), divided by ds.
std::vector<std::pair<double, double>> entropy_series(const RadialRun& run, const Parameters& params,
                                                      double tau_min);

}  // namespace pmelab
