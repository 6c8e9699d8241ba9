#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pmelab/core.hpp"
#include "pmelab/transforms.hpp"

namespace pmelab {

enum class BoundaryKind { Dirichlet, NeumannZero };

struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::NeumannZero;
    double value = 0.0;

    static BoundaryCondition dirichlet(double v) { return {BoundaryKind::Dirichlet, v}; }
    static BoundaryCondition neumann_zero() { return {BoundaryKind::NeumannZero, 0.0}; }
    bool operator==(const BoundaryCondition&) const = default;
};

struct SolverConfig {
    double cfl = 0.9;
    BoundaryCondition bc_left;
    BoundaryCondition bc_right;
    double t_end = 0.0;
    std::vector<double> snapshot_times;
    std::size_t max_steps = 200'000'000;
    /// Relative boundary mass exchange above which a run records a warning.
    double leakage_threshold = 1e-6;

    void validate() const;
};

/// Constant states on either side of s = 0 for W_tau + (W^m)_s = 0.
struct RiemannProblem {
    double w_left = 0.0;
    double w_right = 0.0;
    double m = 2.0;
};

// ----------------------------------------------------------------------------
// 1D scheme for w_tau = eps (w^m)_ss - (w^m)_s
// ----------------------------------------------------------------------------

/// Largest monotone time step times cfl; +inf for an identically zero state.
/// Dirichlet boundary values enter the wave-speed bound.
double cfl_dt(const LineField& w, const Parameters& params, double eps_diff, double cfl = 1.0,
              const BoundaryCondition& left = {}, const BoundaryCondition& right = {});

/// One explicit conservative step: upwind convective flux w_{j}^m on face
/// j+1/2, centered diffusion of w^m. Rejects dt above the monotone bound.
LineField step_line(const LineField& w, double dt, const Parameters& params, double eps_diff,
                    const BoundaryCondition& left = {}, const BoundaryCondition& right = {});

// ----------------------------------------------------------------------------
// Radial scheme for r^{-2} u_t = (u^m)_rr + (N-1)/r (u^m)_r
// ----------------------------------------------------------------------------

// Finite volumes in r on the log grid: r_i^{N-3} |V_i| du_i/dt =
// G_{i+1/2} - G_{i-1/2}, G = r_{i+1/2}^{N-1} (U_{i+1} - U_i)/(r_{i+1} - r_i),
// U = u^m, with |V_i| the trapezoid half-widths. The discrete L12 mass is
// conserved exactly under zero-flux boundaries.

double cfl_dt_radial(const RadialField& u, const Parameters& params, double cfl = 1.0,
                     const BoundaryCondition& inner = {}, const BoundaryCondition& outer = {});

RadialField step_radial(const RadialField& u, double dt, const Parameters& params,
                        const BoundaryCondition& inner = {}, const BoundaryCondition& outer = {});

/// The discrete right-hand side (G_{i+1/2} - G_{i-1/2}) / (r_i^{N-3}|V_i|)
/// applied to nodal values U = u^m, at interior nodes (0 at the ends).
std::vector<double> radial_rhs(const RadialGrid& grid, std::span<const double> U, const Parameters& params);

// ----------------------------------------------------------------------------
// Time integration
// ----------------------------------------------------------------------------

struct LineRun {
    std::vector<LineField> snapshots;  // initial state first
    std::size_t steps = 0;
    double initial_mass = 0.0;         // sum of w ds
    double final_mass = 0.0;
    double boundary_outflow = 0.0;     // net mass that left through the ends
    std::vector<std::string> warnings;
};

struct RadialRun {
    std::vector<RadialField> snapshots;  // initial state first
    std::size_t steps = 0;
    double initial_l12 = 0.0;
    double final_l12 = 0.0;
    std::vector<std::string> warnings;
};

/// Integrates to cfg.t_end (a tau value), landing on every snapshot time.
LineRun run_line(LineField w0, const SolverConfig& cfg, const Parameters& params, double eps_diff);

RadialRun run_radial(RadialField u0, const SolverConfig& cfg, const Parameters& params);

struct Equation {
    enum class Kind { Line, Radial };
    Kind kind = Kind::Line;
    double eps_diff = 1.0;

    static Equation line(double eps = 1.0) { return {Kind::Line, eps}; }
    static Equation radial() { return {Kind::Radial, 1.0}; }
};

/// Runs radial initial data. Times in cfg are physical t and the boundary
/// conditions refer to r_min (bc_left) and r_max (bc_right). For the Line
/// equation the data go through tr1 and the snapshots come back through its
/// inverse.
RadialRun run(const InitialCondition& ic, const RadialGrid& grid, const SolverConfig& cfg,
              const Parameters& params, Equation equation);

/// Evaluates a LineRun at snapshot times, linear in s between cell centers.
SolutionEvaluator history_evaluator(const LineRun& run);

// ----------------------------------------------------------------------------

/// Entropy solution of W_tau + (W^m)_s = 0 with a jump at s = 0.
double riemann_exact(const RiemannProblem& rp, double s, double tau);

}  // namespace pmelab
