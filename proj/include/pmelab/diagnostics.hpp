#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pmelab/core.hpp"

namespace pmelab {

/// omega1 * integral of u(r)/r dr: the radial form of the |x|^{-N} weighted mass.
double weighted_mass_M(const RadialField& u, const Parameters& params);

/// omega1 * integral of r^{N-3} u(r) dr: the radial form of the L^1 norm with
/// weight |x|^{-2}.
double l12_norm(const RadialField& u, const Parameters& params);

/// The weighted p-norm functional omega1 * integral of r^{-1}|h|^p dr
/// (unrooted, as defined for the convergence statements) and its p-th root.
struct NormValue {
    double unrooted = 0.0;
    double rooted = 0.0;
};

NormValue norm_pN(const RadialField& h, double p, const Parameters& params);

/// |a - b| node by node; both fields must share a grid.
RadialField abs_difference(const RadialField& a, const RadialField& b);

struct GraphDistance {
    double pointwise_sup = 0.0;  // sup over abscissae of interval-to-interval distance
    double hausdorff = 0.0;      // planar Hausdorff distance of the two polylines
};

/// Compares two graphs on their shared abscissa range. `resolution` bounds
/// the spacing of points tested along each polyline for the Hausdorff sup
/// (the result is exact up to resolution/2); 0 picks 1e-4 of the bounding
/// box diagonal.
GraphDistance graph_distance(const MultiGraph& g_num, const MultiGraph& g_ref, double resolution = 0.0);

/// Directed Hausdorff distance sup_{p in a} dist(p, b) between polylines.
double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b, double resolution);

/// max_j [(w_{j+1}^{m-1} - w_j^{m-1})/ds] - 1/(m tau); positive means the
/// one-sided bound (w^{m-1})_s <= 1/(m tau) is violated.
double entropy_residual(const LineField& w, const Parameters& params);

struct DecayFit {
    double alpha = 0.0;  // minus the log-log slope
    double r2 = 0.0;     // coefficient of determination of the fit
    std::size_t points = 0;
};

/// Least-squares slope of log value against log t over the final decade of
/// the series (t in [t_last/10, t_last]).
DecayFit decay_fit(std::span<const std::pair<double, double>> series);

}  // namespace pmelab
