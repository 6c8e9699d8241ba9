#pragma once

#include <optional>
#include <span>
#include <string>

#include "pmelab/core.hpp"

namespace pmelab {

enum class ProfileKind { F, W, EK, V, BD, TildeEK, TildeF, TildeBD };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

/// Which constant a profile kind carries.
enum class ProfileConstant { K, k, D };
ProfileConstant constant_of(ProfileKind kind);

/// A closed-form profile together with its free constant.
///
/// k is always the mass constant of W in the s variable (what solve_k
/// returns). The radial profiles F and TildeF place their jump at
/// k_F = (N-2)^{2/m-1} k, which is k itself for N = 3. D may be any real
/// number: B_D for different D are dilations of one another.
struct ProfileSpec {
    ProfileKind kind = ProfileKind::F;
    Parameters params;
    std::optional<double> K;
    std::optional<double> k;
    std::optional<double> D;

    static ProfileSpec make(ProfileKind kind, const Parameters& params, double constant);

    /// Checks that exactly the constant required by kind is present and valid.
    void validate() const;
};

/// k_F: cutoff constant of F in the y = -log r t^{-1/m} variable.
double k_radial(double k, const Parameters& params);

// Scalar evaluators. At a jump abscissa they return the nonzero side.
double eval_F(const ProfileSpec& spec, double r, double t);
double eval_W(const ProfileSpec& spec, double s, double tau);
double eval_EK(const ProfileSpec& spec, double r, double t);
double eval_V(const ProfileSpec& spec, double s, double tau);
double eval_BD(const ProfileSpec& spec, double r, double t);
double eval_tilde(const ProfileSpec& spec, double r, double t);

// The same evaluators parameterised by log r, usable where r underflows.
double eval_F_log(const ProfileSpec& spec, double log_r, double t);
double eval_EK_log(const ProfileSpec& spec, double log_r, double t);
double eval_BD_log(const ProfileSpec& spec, double log_r, double t);
double eval_tilde_log(const ProfileSpec& spec, double log_r, double t);

/// Dispatch on spec.kind; x is r for radial kinds and s for W and V, time is
/// t (radial) or tau (W, V).
double eval_profile(const ProfileSpec& spec, double x, double time);
bool is_line_profile(ProfileKind kind);

RadialField sample_radial(const ProfileSpec& spec, const RadialGrid& grid, double t);
LineField sample_line(const ProfileSpec& spec, const LineGrid& grid, double tau);

/// Fbar(y) = [y/(m(N-2))]_+^{1/(m-1)} for y < k_F, 0 beyond, with the
/// vertical segment [0, Fbar(k_F-)] at y = k_F. Requires an F spec.
MultiGraph stationary_graph_Fbar(const ProfileSpec& spec, std::span<const double> y);

/// W(., tau) at the abscissae s with its jump segment at s = k tau^{1/m}.
MultiGraph graph_W(const ProfileSpec& spec, double tau, std::span<const double> s);

/// Mass of W: integral over y in [0, k] of (y/m)^{1/(m-1)}.
double mass_W(double k, const Parameters& params);

/// k with mass_W(k) = (N-2) M_u0 / omega1, closed form.
double solve_k(double M_u0, const Parameters& params);

/// Same root, found by bisection on an adaptive-quadrature mass.
double solve_k_quadrature(double M_u0, const Parameters& params, double tol = 1e-13);

/// omega1 * integral of r^{N-3} B_D(r, t_ref) dr by quadrature.
double l12_mass_BD(double D, const Parameters& params, double t_ref = 1.0);

/// D with l12_mass_BD(D) = l12_mass, by bisection with bracket expansion.
double solve_D(double l12_mass, const Parameters& params, double t_ref = 1.0);

}  // namespace pmelab
