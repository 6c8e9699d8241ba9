#include "pmelab/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace pmelab {

LineGrid tr1_grid(const RadialGrid& grid, const Parameters& params) {
    validate(grid);
    const double scale = -1.0 / params.theta;  // N - 2
    const double ds = scale * grid.log_step();
    LineGrid out;
    out.n = grid.n;
    out.s_min = scale * -std::log(grid.r_max) - 0.5 * ds;
    out.s_max = scale * -std::log(grid.r_min) + 0.5 * ds;
    return out;
}

RadialGrid tr1_inverse_grid(const LineGrid& grid, const Parameters& params) {
    validate(grid);
    if (grid.n < 2) throw ValidationError("tr1_inverse: need at least two cells");
    const double ds = grid.ds();
    RadialGrid out;
    out.n = grid.n;
    out.r_max = std::exp(params.theta * (grid.s_min + 0.5 * ds));
    out.r_min = std::exp(params.theta * (grid.s_max - 0.5 * ds));
    return out;
}

LineField tr1_forward(const RadialField& u, const Parameters& params) {
    const auto grid = tr1_grid(u.grid(), params);
    std::vector<double> v(u.values().rbegin(), u.values().rend());
    return LineField(grid, std::move(v), tr1_tau(u.t(), params));
}

RadialField tr1_inverse(const LineField& w, const Parameters& params) {
    const auto grid = tr1_inverse_grid(w.grid(), params);
    std::vector<double> v(w.values().rbegin(), w.values().rend());
    return RadialField(grid, std::move(v), tr1_t(w.tau(), params));
}

RadialField tr2_invert_density(const RadialField& u, const Parameters& params) {
    const auto& g = u.grid();
    RadialGrid out;
    out.n = g.n;
    out.r_min = 1.0 / g.r_max;
    out.r_max = 1.0 / g.r_min;
    const double expo = (2.0 - params.N) / params.m;
    std::vector<double> v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        // Node j of the inverted grid is the reciprocal of node n-1-j.
        const double log_r = -g.log_node(g.n - 1 - j);
        v[j] = std::exp(expo * log_r) * u[g.n - 1 - j];
    }
    return RadialField(out, std::move(v), u.t());
}

MultiGraph rescale_decay(const LineField& w, const Parameters& params) {
    const double tau = w.tau();
    if (!(tau > 0.0)) throw ValidationError("rescale_decay: tau must be > 0");
    const double scale = std::pow(tau, 1.0 / params.m);
    const auto& g = w.grid();
    std::vector<double> y(g.n), v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        y[j] = g.center(j) / scale;
        v[j] = scale * w[j];
    }
    return MultiGraph::univalued(y, v);
}

LineField rescale_hyperbolic(const SolutionEvaluator& w, double lambda, const LineGrid& window,
                             double tau) {
    if (!(lambda > 0.0)) throw ValidationError("rescale_hyperbolic: lambda must be > 0");
    validate(window);
    std::vector<double> v(window.n);
    for (std::size_t j = 0; j < window.n; ++j) v[j] = w(lambda * window.center(j), lambda * tau);
    return LineField(window, std::move(v), tau);
}

}  // namespace pmelab
