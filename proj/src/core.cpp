#include "pmelab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pmelab {

Parameters make_parameters(double m, int N) {
    if (!(m > 1.0) || !std::isfinite(m)) {
        throw ValidationError("m must satisfy m > 1 (got " + std::to_string(m) + ")");
    }
    if (N < 3) {
        throw ValidationError("N must satisfy N >= 3 (got " + std::to_string(N) + ")");
    }
    Parameters p;
    p.m = m;
    p.N = N;
    p.theta = -1.0 / static_cast<double>(N - 2);
    p.gamma2 = static_cast<double>(N) - static_cast<double>(N - 2) / m;
    const double half_n = 0.5 * static_cast<double>(N);
    p.omega1 = 2.0 * std::pow(std::numbers::pi, half_n) / std::tgamma(half_n);
    return p;
}

// ----------------------------------------------------------------------------

double RadialGrid::log_step() const {
    return (std::log(r_max) - std::log(r_min)) / static_cast<double>(n - 1);
}

double RadialGrid::log_node(std::size_t i) const {
    return std::log(r_min) + static_cast<double>(i) * log_step();
}

double RadialGrid::node(std::size_t i) const { return std::exp(log_node(i)); }

void validate(const LineGrid& grid) {
    if (grid.n < 1) throw ValidationError("LineGrid: n must be >= 1");
    if (!(grid.s_max > grid.s_min) || !std::isfinite(grid.s_min) || !std::isfinite(grid.s_max)) {
        throw ValidationError("LineGrid: need finite s_min < s_max");
    }
}

void validate(const RadialGrid& grid) {
    if (grid.n < 2) throw ValidationError("RadialGrid: n must be >= 2");
    if (!(grid.r_min > 0.0)) throw ValidationError("RadialGrid: r_min must be > 0");
    if (!(grid.r_max > grid.r_min) || !std::isfinite(grid.r_max)) {
        throw ValidationError("RadialGrid: need r_min < r_max < inf");
    }
}

namespace {

void check_values(std::span<const double> values, std::size_t n, const char* what) {
    if (values.size() != n) {
        throw ValidationError(std::string(what) + ": value count does not match grid size");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v) || v < 0.0) {
            std::ostringstream os;
            os << what << ": value " << v << " at index " << i << " is not a finite nonnegative number";
            throw ValidationError(os.str());
        }
    }
}

}  // namespace

LineField::LineField(LineGrid grid, std::vector<double> values, double tau)
    : grid_(grid), values_(std::move(values)), tau_(tau) {
    validate(grid_);
    check_values(values_, grid_.n, "LineField");
    if (!(tau_ >= 0.0)) throw ValidationError("LineField: tau must be >= 0");
}

RadialField::RadialField(RadialGrid grid, std::vector<double> values, double t)
    : grid_(grid), values_(std::move(values)), t_(t) {
    validate(grid_);
    check_values(values_, grid_.n, "RadialField");
    if (!(t_ >= 0.0)) throw ValidationError("RadialField: t must be >= 0");
}

// ----------------------------------------------------------------------------

MultiGraph::MultiGraph(std::vector<GraphSample> samples) : samples_(std::move(samples)) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (!std::isfinite(s.x) || !std::isfinite(s.lo) || !std::isfinite(s.hi)) {
            throw ValidationError("MultiGraph: non-finite sample");
        }
        if (s.lo > s.hi) throw ValidationError("MultiGraph: lo > hi at a sample");
        if (i > 0 && !(s.x > samples_[i - 1].x)) {
            throw ValidationError("MultiGraph: abscissae must be strictly increasing");
        }
    }
}

MultiGraph MultiGraph::univalued(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("MultiGraph: x/y size mismatch");
    std::vector<GraphSample> s;
    s.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s.push_back({x[i], y[i], y[i]});
    return MultiGraph(std::move(s));
}

std::vector<Point2> MultiGraph::polyline() const {
    std::vector<Point2> pts;
    pts.reserve(samples_.size() + 8);
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (s.lo == s.hi) {
            pts.push_back({s.x, s.lo});
            continue;
        }
        bool enter_low;
        if (!pts.empty()) {
            enter_low = std::abs(pts.back().y - s.lo) <= std::abs(pts.back().y - s.hi);
        } else if (i + 1 < samples_.size()) {
            const double next = 0.5 * (samples_[i + 1].lo + samples_[i + 1].hi);
            enter_low = std::abs(next - s.hi) <= std::abs(next - s.lo);
        } else {
            enter_low = true;
        }
        if (enter_low) {
            pts.push_back({s.x, s.lo});
            pts.push_back({s.x, s.hi});
        } else {
            pts.push_back({s.x, s.hi});
            pts.push_back({s.x, s.lo});
        }
    }
    return pts;
}

std::pair<double, double> MultiGraph::interval_at(double x) const {
    if (samples_.empty() || x < samples_.front().x || x > samples_.back().x) {
        throw ValidationError("MultiGraph::interval_at: abscissa outside the graph");
    }
    auto it = std::lower_bound(samples_.begin(), samples_.end(), x,
                               [](const GraphSample& s, double v) { return s.x < v; });
    if (it->x == x) return {it->lo, it->hi};
    const auto pts = polyline();
    // Locate the polyline segment spanning x (non-vertical by construction).
    auto pit = std::lower_bound(pts.begin(), pts.end(), x,
                                [](const Point2& p, double v) { return p.x < v; });
    const Point2 b = *pit;
    const Point2 a = *(pit - 1);
    const double y = a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
    return {y, y};
}

MultiGraph MultiGraph::clipped(double a, double b) const {
    if (samples_.empty() || b < samples_.front().x || a > samples_.back().x || a > b) {
        throw ValidationError("MultiGraph::clipped: empty restriction");
    }
    a = std::max(a, samples_.front().x);
    b = std::min(b, samples_.back().x);
    const auto pts = polyline();
    auto value_from = [&](double x, bool from_left) {
        // Polyline height at x approached from the requested side.
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            if (pts[k].x <= x && x <= pts[k + 1].x && pts[k + 1].x > pts[k].x) {
                return pts[k].y + (pts[k + 1].y - pts[k].y) * (x - pts[k].x) / (pts[k + 1].x - pts[k].x);
            }
        }
        return from_left ? pts.back().y : pts.front().y;
    };
    std::vector<GraphSample> out;
    for (const auto& s : samples_) {
        if (s.x < a || s.x > b) continue;
        out.push_back(s);
    }
    if (out.empty() || out.front().x > a) {
        const double y = value_from(a, false);
        out.insert(out.begin(), GraphSample{a, y, y});
    }
    if (out.back().x < b) {
        const double y = value_from(b, true);
        out.push_back({b, y, y});
    }
    return MultiGraph(std::move(out));
}

// ----------------------------------------------------------------------------

InitialCondition InitialCondition::bump() {
    InitialCondition ic;
    ic.kind_ = Kind::Bump;
    return ic;
}

InitialCondition InitialCondition::plateau(double K, double r_inner, double r_outer) {
    if (!(K > 0.0)) throw ValidationError("plateau: K must be > 0");
    if (!(r_inner > 0.0) || !(r_outer > r_inner)) {
        throw ValidationError("plateau: need 0 < r_inner < r_outer");
    }
    InitialCondition ic;
    ic.kind_ = Kind::Plateau;
    ic.K_ = K;
    ic.r_inner_ = r_inner;
    ic.r_outer_ = r_outer;
    return ic;
}

InitialCondition InitialCondition::custom(std::vector<double> r, std::vector<double> u) {
    if (r.size() != u.size() || r.empty()) throw ValidationError("custom: need matching nonempty tables");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(u[i]) || u[i] < 0.0) throw ValidationError("custom: u0 must be >= 0");
        if (!(r[i] >= 0.0) || (i > 0 && !(r[i] > r[i - 1]))) {
            throw ValidationError("custom: r must be nonnegative and strictly increasing");
        }
    }
    InitialCondition ic;
    ic.kind_ = Kind::Custom;
    ic.table_r_ = std::move(r);
    ic.table_u_ = std::move(u);
    return ic;
}

double InitialCondition::operator()(double r) const {
    switch (kind_) {
        case Kind::Bump:
            return std::max((r - 0.5) * (1.5 - r), 0.0);
        case Kind::Plateau: {
            if (r <= r_inner_) return K_;
            if (r >= r_outer_) return 0.0;
            const double c = std::cos(0.5 * std::numbers::pi * (r - r_inner_) / (r_outer_ - r_inner_));
            return K_ * c * c;
        }
        case Kind::Custom: {
            if (r <= table_r_.front()) return table_u_.front();
            if (r >= table_r_.back()) return r == table_r_.back() ? table_u_.back() : 0.0;
            auto it = std::upper_bound(table_r_.begin(), table_r_.end(), r);
            const std::size_t i = static_cast<std::size_t>(it - table_r_.begin());
            const double f = (r - table_r_[i - 1]) / (table_r_[i] - table_r_[i - 1]);
            return table_u_[i - 1] + f * (table_u_[i] - table_u_[i - 1]);
        }
    }
    return 0.0;
}

RadialField InitialCondition::sample(const RadialGrid& grid) const {
    validate(grid);
    std::vector<double> v(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = (*this)(grid.node(i));
    return RadialField(grid, std::move(v), 0.0);
}

std::string to_string(InitialCondition::Kind kind) {
    switch (kind) {
        case InitialCondition::Kind::Bump: return "bump";
        case InitialCondition::Kind::Plateau: return "plateau";
        case InitialCondition::Kind::Custom: return "custom";
    }
    return "unknown";
}

// ----------------------------------------------------------------------------

double quad_trapezoid(const LineField& field, const std::function<double(double)>& weight) {
    const auto& g = field.grid();
    const double ds = g.ds();
    double sum = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) sum += weight(g.center(j)) * field[j];
    return sum * ds;
}

double quad_trapezoid(const RadialField& field, const std::function<double(double)>& weight) {
    const auto& g = field.grid();
    double sum = 0.0;
    double r_prev = g.node(0);
    double f_prev = weight(r_prev) * field[0];
    for (std::size_t i = 1; i < g.n; ++i) {
        const double r = g.node(i);
        const double f = weight(r) * field[i];
        sum += 0.5 * (f + f_prev) * (r - r_prev);
        r_prev = r;
        f_prev = f;
    }
    return sum;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
    if (a == b) return 0.0;
    // Split into a few panels first so narrow features are not skipped.
    constexpr int panels = 16;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * h;
        const double hi = (k + 1 == panels) ? b : a + (k + 1) * h;
        const double fa = f(lo);
        const double fb = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels, max_depth);
    }
    return total;
}

}  // namespace pmelab
