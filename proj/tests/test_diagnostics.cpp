#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pmelab/diagnostics.hpp"
#include "pmelab/profiles.hpp"

using namespace pmelab;
using doctest::Approx;

namespace {

double seg_dist(Point2 p, Point2 a, Point2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double l2 = dx * dx + dy * dy;
    const double t = l2 > 0.0 ? std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / l2, 0.0, 1.0) : 0.0;
    return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

// Brute force: every sampled point of a against every segment of b.
double brute_directed(const std::vector<Point2>& a, const std::vector<Point2>& b, int sub) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        for (int i = 0; i <= sub; ++i) {
            const double f = static_cast<double>(i) / sub;
            const Point2 p{a[k].x + f * (a[k + 1].x - a[k].x), a[k].y + f * (a[k + 1].y - a[k].y)};
            double best = 1e300;
            for (std::size_t j = 0; j + 1 < b.size(); ++j) best = std::min(best, seg_dist(p, b[j], b[j + 1]));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

MultiGraph random_graph(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<GraphSample> s;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        const double a = u(rng), b = rng() % 5 == 0 ? u(rng) : a;
        s.push_back({x, std::min(a, b), std::max(a, b)});
    }
    return MultiGraph(std::move(s));
}

}  // namespace

TEST_CASE("weighted mass and L12 norm of the bump against Gauss-Legendre") {
    const auto p = make_parameters(3.0, 3);
    const RadialGrid g{0.25, 2.0, 20001};
    const RadialField u = InitialCondition::bump().sample(g);
    const double M = 4.0 * std::numbers::pi * oracle::gauss([](double r) { return oracle::bump(r) / r; }, 0.5, 1.5);
    CHECK(weighted_mass_M(u, p) == Approx(M).epsilon(1e-6));
    CHECK(l12_norm(u, p) == Approx(2.0 * std::numbers::pi / 3.0).epsilon(1e-6));

    const auto q = make_parameters(2.0, 5);
    const double l12 = oracle::omega1(5) * oracle::gauss([](double r) { return r * r * oracle::bump(r); }, 0.5, 1.5);
    CHECK(l12_norm(u, q) == Approx(l12).epsilon(1e-6));
}

TEST_CASE("norm_pN is the weighted p-th power integral and its root") {
    const auto p = make_parameters(2.0, 4);
    const RadialGrid g{0.5, 1.5, 4001};
    const RadialField u = InitialCondition::bump().sample(g);
    for (double q : {1.0, 2.0, 3.5}) {
        const double ref =
            oracle::omega1(4) * oracle::gauss([q](double r) { return std::pow(oracle::bump(r), q) / r; }, 0.5, 1.5);
        const NormValue v = norm_pN(u, q, p);
        CHECK(v.unrooted == Approx(ref).epsilon(1e-5));
        CHECK(v.rooted == Approx(std::pow(ref, 1.0 / q)).epsilon(1e-5));
    }
    CHECK_THROWS_AS(norm_pN(u, 0.5, p), ValidationError);

    const RadialField z = abs_difference(u, u);
    for (double x : z.values()) CHECK(x == 0.0);
    CHECK_THROWS_AS(abs_difference(u, InitialCondition::bump().sample(RadialGrid{0.5, 1.5, 11})), ValidationError);
}

TEST_CASE("graph distance of shifted lines") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y0{0.0, 0.0, 0.0, 0.0}, y1{0.5, 0.5, 0.5, 0.5};
    const auto d = graph_distance(MultiGraph::univalued(x, y0), MultiGraph::univalued(x, y1));
    CHECK(d.pointwise_sup == Approx(0.5));
    CHECK(d.hausdorff == Approx(0.5));
}

TEST_CASE("a jump and its smeared version are close in Hausdorff but not pointwise") {
    // Step at x = 1 against a ramp over [1 - h, 1].
    for (double h : {0.1, 0.01, 0.001}) {
        const MultiGraph step({{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {2.0, 0.0, 0.0}});
        const MultiGraph ramp({{0.0, 1.0, 1.0}, {1.0 - h, 1.0, 1.0}, {1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}});
        const auto d = graph_distance(ramp, step, 1e-5);
        // Nearest point to the corner (1, 1) lies on the steep ramp segment.
        CHECK(d.hausdorff == Approx(h / std::sqrt(1.0 + h * h)).epsilon(1e-3));
        CHECK(d.pointwise_sup == Approx(0.0).scale(1.0));
    }
    // Two steps at different places: pointwise sees the full height between them.
    const MultiGraph a({{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.025, 0.0, 0.0}, {2.0, 0.0, 0.0}});
    const MultiGraph b({{0.0, 1.0, 1.0}, {1.025, 1.0, 1.0}, {1.05, 0.0, 1.0}, {2.0, 0.0, 0.0}});
    const auto d = graph_distance(a, b, 1e-5);
    CHECK(d.pointwise_sup == 1.0);
    CHECK(d.hausdorff == Approx(0.05).epsilon(1e-3));
}

TEST_CASE("property: Hausdorff agrees with brute force, is symmetric and obeys the triangle inequality") {
    std::mt19937_64 rng(5);
    const double res = 1e-3;
    for (int trial = 0; trial < 60; ++trial) {
        const MultiGraph a = random_graph(rng, 6 + rng() % 10);
        const MultiGraph b = random_graph(rng, 6 + rng() % 10);
        const MultiGraph c = random_graph(rng, 6 + rng() % 10);
        const double ab = graph_distance(a, b, res).hausdorff;
        const double ba = graph_distance(b, a, res).hausdorff;
        const double bc = graph_distance(b, c, res).hausdorff;
        const double ac = graph_distance(a, c, res).hausdorff;
        CHECK(ab == Approx(ba).epsilon(1e-14));
        CHECK(ac <= ab + bc + 2.0 * res);
        const auto pa = a.polyline(), pb = b.polyline();
        const double brute = std::max(brute_directed(pa, pb, 400), brute_directed(pb, pa, 400));
        CHECK(std::abs(ab - brute) <= res);
        CHECK(graph_distance(a, a, res).hausdorff < 1e-14);
    }
}

TEST_CASE("graph_distance clips to the shared range and rejects disjoint graphs") {
    const std::vector<double> x0{0.0, 1.0}, x1{0.5, 3.0}, x2{2.0, 3.0}, y{0.0, 1.0};
    const auto d = graph_distance(MultiGraph::univalued(x0, y), MultiGraph::univalued(x1, y));
    // On [0.5, 1]: y = x against y = (x - 0.5)/2.5.
    CHECK(d.pointwise_sup == Approx(0.8));
    CHECK_THROWS_AS(graph_distance(MultiGraph::univalued(x0, y), MultiGraph::univalued(x2, y)), ValidationError);
    CHECK_THROWS_AS(graph_distance(MultiGraph(), MultiGraph::univalued(x0, y)), ValidationError);
}

TEST_CASE("entropy residual vanishes on the fan of W and is positive on an upward jump") {
    const auto p = make_parameters(3.0, 3);
    const LineGrid g{0.0, 10.0, 1000};
    const auto V = ProfileSpec::make(ProfileKind::V, p, 100.0);
    // V^{m-1} = s/(m tau): slope exactly 1/(m tau).
    CHECK(entropy_residual(sample_line(V, g, 2.0), p) == Approx(0.0).scale(1.0).epsilon(1e-9));
    std::vector<double> up(g.n, 0.0);
    for (std::size_t j = g.n / 2; j < g.n; ++j) up[j] = 1.0;
    CHECK(entropy_residual(LineField(g, up, 1.0), p) == Approx(1.0 / g.ds() - 1.0 / 3.0));
    std::vector<double> down(g.n, 0.0);
    for (std::size_t j = 0; j < g.n / 2; ++j) down[j] = 1.0;
    CHECK(entropy_residual(LineField(g, down, 1.0), p) == Approx(-1.0 / 3.0));
    CHECK_THROWS_AS(entropy_residual(LineField(g, down, 0.0), p), ValidationError);
}

TEST_CASE("decay_fit recovers power laws over the final decade") {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i <= 30; ++i) {
        const double t = std::pow(10.0, i / 10.0);
        s.push_back({t, 3.0 * std::pow(t, -1.0 / 3.0)});
    }
    const DecayFit f = decay_fit(s);
    CHECK(f.alpha == Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(f.r2 == Approx(1.0));
    CHECK(f.points == 11);

    // Early transient is ignored.
    for (int i = 0; i < 10; ++i) s[i].second = 50.0;
    CHECK(decay_fit(s).alpha == Approx(1.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(decay_fit(std::vector<std::pair<double, double>>(s.begin(), s.begin() + 4)), ValidationError);
    auto short_span = std::vector<std::pair<double, double>>(s.end() - 6, s.end());
    CHECK_THROWS_AS(decay_fit(short_span), ValidationError);
    s[20].second = 0.0;
    CHECK_THROWS_AS(decay_fit(s), ValidationError);
}
