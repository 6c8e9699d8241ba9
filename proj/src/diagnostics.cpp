#include "pmelab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmelab {

double weighted_mass_M(const RadialField& u, const Parameters& params) {
    return params.omega1 * quad_trapezoid(u, [](double r) { return 1.0 / r; });
}

double l12_norm(const RadialField& u, const Parameters& params) {
    const int e = params.N - 3;
    return params.omega1 * quad_trapezoid(u, [e](double r) { return std::pow(r, e); });
}

NormValue norm_pN(const RadialField& h, double p, const Parameters& params) {
    if (!(p >= 1.0)) throw ValidationError("norm_pN: p must be >= 1");
    std::vector<double> powered(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) powered[i] = std::pow(std::abs(h[i]), p);
    const RadialField hp(h.grid(), std::move(powered), h.t());
    NormValue out;
    out.unrooted = weighted_mass_M(hp, params);
    out.rooted = std::pow(out.unrooted, 1.0 / p);
    return out;
}

RadialField abs_difference(const RadialField& a, const RadialField& b) {
    if (a.size() != b.size()) throw ValidationError("abs_difference: grids differ");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b[i]);
    return RadialField(a.grid(), std::move(d), a.t());
}

// ----------------------------------------------------------------------------

namespace {

/// Entry and exit heights of each sample along the polyline.
struct GraphEnds {
    std::vector<double> x, lo, hi, entry, exit;

    explicit GraphEnds(const MultiGraph& g) {
        const auto pts = g.polyline();
        std::size_t k = 0;
        for (const auto& s : g.samples()) {
            x.push_back(s.x);
            lo.push_back(s.lo);
            hi.push_back(s.hi);
            entry.push_back(pts[k].y);
            if (s.lo != s.hi) ++k;
            exit.push_back(pts[k].y);
            ++k;
        }
    }

    /// Interval of values at x, advancing a monotone cursor.
    std::pair<double, double> at(double xq, std::size_t& cursor) const {
        while (cursor + 1 < x.size() && x[cursor + 1] <= xq) ++cursor;
        if (x[cursor] == xq) return {lo[cursor], hi[cursor]};
        const std::size_t i = cursor;
        const double f = (xq - x[i]) / (x[i + 1] - x[i]);
        const double y = exit[i] + f * (entry[i + 1] - exit[i]);
        return {y, y};
    }
};

double interval_gap(std::pair<double, double> a, std::pair<double, double> b) {
    return std::max({0.0, b.first - a.second, a.first - b.second});
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

/// Distance from p to an x-monotone polyline, scanning outward from the
/// segment under p until the horizontal gap exceeds the best distance.
double point_polyline_distance(Point2 p, std::span<const Point2> q) {
    if (q.size() == 1) return std::hypot(p.x - q[0].x, p.y - q[0].y);
    const std::size_t nseg = q.size() - 1;
    // First segment whose right end reaches p.x.
    std::size_t lo = 0, hi = nseg;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (q[mid + 1].x < p.x) lo = mid + 1;
        else hi = mid;
    }
    const std::size_t start = std::min(lo, nseg - 1);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = start; k < nseg; ++k) {
        if (q[k].x - p.x > best) break;
        best = std::min(best, point_segment_distance(p, q[k], q[k + 1]));
    }
    for (std::size_t k = start; k-- > 0;) {
        if (p.x - q[k + 1].x > best) break;
        best = std::min(best, point_segment_distance(p, q[k], q[k + 1]));
    }
    return best;
}

}  // namespace

double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b, double resolution) {
    if (a.empty() || b.empty()) throw ValidationError("directed_hausdorff: empty polyline");
    if (!(resolution > 0.0)) throw ValidationError("directed_hausdorff: resolution must be > 0");
    double worst = point_polyline_distance(a[0], b);
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        const Point2 p0 = a[k];
        const Point2 p1 = a[k + 1];
        const double len = std::hypot(p1.x - p0.x, p1.y - p0.y);
        const auto pieces = static_cast<std::size_t>(std::ceil(len / resolution));
        for (std::size_t i = 1; i <= std::max<std::size_t>(pieces, 1); ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(pieces, 1));
            const Point2 p{p0.x + f * (p1.x - p0.x), p0.y + f * (p1.y - p0.y)};
            worst = std::max(worst, point_polyline_distance(p, b));
        }
    }
    return worst;
}

GraphDistance graph_distance(const MultiGraph& g_num, const MultiGraph& g_ref, double resolution) {
    if (g_num.empty() || g_ref.empty()) throw ValidationError("graph_distance: empty graph");
    const double a = std::max(g_num.x_min(), g_ref.x_min());
    const double b = std::min(g_num.x_max(), g_ref.x_max());
    if (a > b) throw ValidationError("graph_distance: abscissa ranges are disjoint");
    const MultiGraph num = g_num.clipped(a, b);
    const MultiGraph ref = g_ref.clipped(a, b);

    GraphDistance out;
    {
        const GraphEnds en(num), er(ref);
        std::vector<double> xs(en.x);
        xs.insert(xs.end(), er.x.begin(), er.x.end());
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::size_t cn = 0, cr = 0;
        for (double x : xs) out.pointwise_sup = std::max(out.pointwise_sup, interval_gap(en.at(x, cn), er.at(x, cr)));
    }

    const auto pn = num.polyline();
    const auto pr = ref.polyline();
    if (resolution <= 0.0) {
        double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
        for (const auto* pts : {&pn, &pr}) {
            for (const auto& p : *pts) {
                ylo = std::min(ylo, p.y);
                yhi = std::max(yhi, p.y);
            }
        }
        const double diag = std::hypot(b - a, yhi - ylo);
        resolution = diag > 0.0 ? 1e-4 * diag : 1.0;
    }
    out.hausdorff = std::max(directed_hausdorff(pn, pr, resolution), directed_hausdorff(pr, pn, resolution));
    return out;
}

// ----------------------------------------------------------------------------

double entropy_residual(const LineField& w, const Parameters& params) {
    if (!(w.tau() > 0.0)) throw ValidationError("entropy_residual: tau must be > 0");
    if (w.size() < 2) throw ValidationError("entropy_residual: need at least two cells");
    const double ds = w.grid().ds();
    const double e = params.m - 1.0;
    double prev = std::pow(w[0], e);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < w.size(); ++j) {
        const double cur = std::pow(w[j], e);
        worst = std::max(worst, (cur - prev) / ds);
        prev = cur;
    }
    return worst - 1.0 / (params.m * w.tau());
}

DecayFit decay_fit(std::span<const std::pair<double, double>> series) {
    if (series.size() < 5) throw ValidationError("decay_fit: need at least 5 points");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!(series[i].first > 0.0) || !(series[i].second > 0.0)) {
            throw ValidationError("decay_fit: times and values must be > 0");
        }
        if (i > 0 && !(series[i].first > series[i - 1].first)) {
            throw ValidationError("decay_fit: times must be strictly increasing");
        }
    }
    const double t_last = series.back().first;
    if (series.front().first > t_last / 10.0) throw ValidationError("decay_fit: times must span a decade");
    std::vector<double> x, y;
    for (const auto& [t, v] : series) {
        if (t >= t_last / 10.0 * (1.0 - 1e-12)) {
            x.push_back(std::log(t));
            y.push_back(std::log(v));
        }
    }
    if (x.size() < 5) throw ValidationError("decay_fit: fewer than 5 points in the final decade");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + slope * (x[i] - mx));
        ss_res += r * r;
    }
    DecayFit out;
    out.alpha = -slope;
    out.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    out.points = x.size();
    return out;
}

}  // namespace pmelab
