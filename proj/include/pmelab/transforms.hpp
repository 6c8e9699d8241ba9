#pragma once

#include <cmath>
#include <functional>

#include "pmelab/core.hpp"

namespace pmelab {

// Changes of variables between the radial equation and its 1D and
// self-similar forms. None of these resample: coordinates are relabelled and
// the array order is reversed where the map is decreasing.

/// u(r, t) -> w(s, tau) with s = log(r)/theta, tau = t/theta^2.
LineField tr1_forward(const RadialField& u, const Parameters& params);

/// Inverse of tr1_forward.
RadialField tr1_inverse(const LineField& w, const Parameters& params);

/// The tr1 image of a radial grid (cell centers of the result are the images
/// of the radial nodes).
LineGrid tr1_grid(const RadialGrid& grid, const Parameters& params);
RadialGrid tr1_inverse_grid(const LineGrid& grid, const Parameters& params);

inline double tr1_s(double r, const Parameters& p) { return std::log(r) / p.theta; }
inline double tr1_tau(double t, const Parameters& p) { return t / (p.theta * p.theta); }
inline double tr1_t(double tau, const Parameters& p) { return p.theta * p.theta * tau; }

/// u~(r) = r^{(2-N)/m} u(1/r) on [1/r_max, 1/r_min].
RadialField tr2_invert_density(const RadialField& u, const Parameters& params);

/// v(y) = tau^{1/m} w(y tau^{1/m}, tau) sampled on the image of the s-grid.
MultiGraph rescale_decay(const LineField& w, const Parameters& params);

/// Evaluates a solution w(s, tau); throws ValidationError outside its data.
using SolutionEvaluator = std::function<double(double s, double tau)>;

/// w_lambda(s, tau) = w(lambda s, lambda tau) at the cell centers of window.
LineField rescale_hyperbolic(const SolutionEvaluator& w, double lambda, const LineGrid& window,
                             double tau);

}  // namespace pmelab
