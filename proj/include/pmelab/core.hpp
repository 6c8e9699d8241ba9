#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmelab {

/// Thrown when an argument falls outside the valid domain of an operation.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Model constants for |x|^{-2} u_t = Laplacian(u^m) in dimension N.
struct Parameters {
    double m = 0.0;
    int N = 0;
    double theta = 0.0;   // -1/(N-2), the log-radius scale of the s variable
    double gamma2 = 0.0;  // N - (N-2)/m, density exponent reached by inversion
    double omega1 = 0.0;  // area of the unit sphere in R^N
};

Parameters make_parameters(double m, int N);

// ----------------------------------------------------------------------------
// Grids and fields
// ----------------------------------------------------------------------------

/// Uniform cell-centered grid on [s_min, s_max].
struct LineGrid {
    double s_min = 0.0;
    double s_max = 1.0;
    std::size_t n = 1;

    double ds() const { return (s_max - s_min) / static_cast<double>(n); }
    double center(std::size_t j) const { return s_min + (static_cast<double>(j) + 0.5) * ds(); }
    bool operator==(const LineGrid&) const = default;
};

/// Node grid on [r_min, r_max] with nodes equispaced in log r.
struct RadialGrid {
    double r_min = 1.0;
    double r_max = 2.0;
    std::size_t n = 2;

    double log_step() const;
    double log_node(std::size_t i) const;
    double node(std::size_t i) const;
    bool operator==(const RadialGrid&) const = default;
};

void validate(const LineGrid& grid);
void validate(const RadialGrid& grid);

/// Cell averages of w(s, tau) on a LineGrid.
class LineField {
public:
    LineField(LineGrid grid, std::vector<double> values, double tau);

    const LineGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> mutable_values() { return values_; }
    double tau() const { return tau_; }
    void set_tau(double tau) { tau_ = tau; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }

private:
    LineGrid grid_;
    std::vector<double> values_;
    double tau_;
};

/// Nodal values of u(r, t) on a log-spaced RadialGrid.
class RadialField {
public:
    RadialField(RadialGrid grid, std::vector<double> values, double t);

    const RadialGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> mutable_values() { return values_; }
    double t() const { return t_; }
    void set_t(double t) { t_ = t; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    RadialGrid grid_;
    std::vector<double> values_;
    double t_;
};

// ----------------------------------------------------------------------------
// Multivalued graphs
// ----------------------------------------------------------------------------

/// At abscissa x the function takes every value in [lo, hi].
struct GraphSample {
    double x;
    double lo;
    double hi;
};

struct Point2 {
    double x;
    double y;
};

/// A possibly multivalued function sampled at strictly increasing abscissae.
class MultiGraph {
public:
    MultiGraph() = default;
    explicit MultiGraph(std::vector<GraphSample> samples);

    static MultiGraph univalued(std::span<const double> x, std::span<const double> y);

    std::span<const GraphSample> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    double x_min() const { return samples_.front().x; }
    double x_max() const { return samples_.back().x; }

    /// Planar polyline through the samples. A jump sample contributes its
    /// vertical segment, entered from the end nearer the previous point.
    std::vector<Point2> polyline() const;

    /// Set of values at x: the sample interval at a sample abscissa, else the
    /// linear interpolation between the adjacent polyline points.
    std::pair<double, double> interval_at(double x) const;

    /// Restriction to [a, b], interpolating the end samples.
    MultiGraph clipped(double a, double b) const;

private:
    std::vector<GraphSample> samples_;
};

// ----------------------------------------------------------------------------
// Initial data
// ----------------------------------------------------------------------------

class InitialCondition {
public:
    enum class Kind { Bump, Plateau, Custom };

    /// u0(r) = max{(r - 0.5)(1.5 - r), 0}.
    static InitialCondition bump();
    /// u0 = K on [0, r_inner], cos^2 taper to 0 at r_outer, 0 beyond.
    static InitialCondition plateau(double K, double r_inner = 0.5, double r_outer = 1.0);
    /// Linear interpolation of (r, u0) pairs; 0 beyond the last pair, the
    /// first value below the first pair.
    static InitialCondition custom(std::vector<double> r, std::vector<double> u);

    Kind kind() const { return kind_; }
    double K() const { return K_; }
    double r_inner() const { return r_inner_; }
    double r_outer() const { return r_outer_; }
    std::span<const double> table_r() const { return table_r_; }
    std::span<const double> table_u() const { return table_u_; }

    double operator()(double r) const;
    /// Value at the origin (limit r -> 0).
    double at_origin() const { return (*this)(0.0); }

    RadialField sample(const RadialGrid& grid) const;

private:
    Kind kind_ = Kind::Bump;
    double K_ = 0.0;
    double r_inner_ = 0.0;
    double r_outer_ = 0.0;
    std::vector<double> table_r_;
    std::vector<double> table_u_;
};

std::string to_string(InitialCondition::Kind kind);

// ----------------------------------------------------------------------------
// Quadrature
// ----------------------------------------------------------------------------

/// Integral of weight(s) w(s) ds over [s_min, s_max]; cell-midpoint form for
/// the cell-average representation.
double quad_trapezoid(const LineField& field, const std::function<double(double)>& weight);

/// Trapezoidal integral of weight(r) u(r) dr over the nodes.
double quad_trapezoid(const RadialField& field, const std::function<double(double)>& weight);

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth = 50);

}  // namespace pmelab
