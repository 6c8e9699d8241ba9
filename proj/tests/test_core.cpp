#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "pmelab/core.hpp"

using namespace pmelab;
using doctest::Approx;

TEST_CASE("make_parameters derives theta, gamma2 and omega1") {
    const Parameters p = make_parameters(3.0, 3);
    CHECK(p.theta == -1.0);
    CHECK(p.gamma2 == Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(p.omega1 == Approx(4.0 * std::numbers::pi).epsilon(1e-15));

    const Parameters q = make_parameters(2.0, 4);
    CHECK(q.theta == -0.5);
    CHECK(q.gamma2 == Approx(3.0).epsilon(1e-15));
    CHECK(q.omega1 == Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-15));

    for (int N = 3; N <= 9; ++N) CHECK(make_parameters(1.5, N).omega1 == Approx(oracle::omega1(N)).epsilon(1e-14));
}

TEST_CASE("make_parameters rejects m <= 1 and N < 3") {
    CHECK_THROWS_WITH_AS(make_parameters(1.0, 3), doctest::Contains("m > 1"), ValidationError);
    CHECK_THROWS_AS(make_parameters(0.5, 3), ValidationError);
    CHECK_THROWS_AS(make_parameters(std::nan(""), 3), ValidationError);
    CHECK_THROWS_WITH_AS(make_parameters(2.0, 2), doctest::Contains("N >= 3"), ValidationError);
}

TEST_CASE("grids validate and the radial grid is uniform in log r") {
    CHECK_THROWS_AS(validate(LineGrid{0.0, 1.0, 0}), ValidationError);
    CHECK_THROWS_AS(validate(LineGrid{1.0, 1.0, 4}), ValidationError);
    CHECK_THROWS_AS(validate(RadialGrid{0.0, 1.0, 4}), ValidationError);
    CHECK_THROWS_AS(validate(RadialGrid{1.0, 0.5, 4}), ValidationError);
    CHECK_THROWS_AS(validate(RadialGrid{0.1, 1.0, 1}), ValidationError);

    const RadialGrid g{std::exp(-3.0), std::exp(2.0), 101};
    CHECK(g.node(0) == g.r_min);
    CHECK(g.node(100) == g.r_max);
    for (std::size_t i = 0; i + 1 < g.n; ++i) {
        CHECK(std::log(g.node(i + 1)) - std::log(g.node(i)) == Approx(0.05).epsilon(1e-12));
    }
    const LineGrid lg{0.0, 1.0, 4};
    CHECK(lg.ds() == 0.25);
    CHECK(lg.center(0) == 0.125);
    CHECK(lg.center(3) == 0.875);
}

TEST_CASE("fields reject NaN, negative values and size mismatch") {
    const LineGrid lg{0.0, 1.0, 3};
    CHECK_THROWS_AS(LineField(lg, {1.0, -1e-300, 0.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(LineField(lg, {1.0, std::nan(""), 0.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(LineField(lg, {1.0, 2.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(LineField(lg, {1.0, 2.0, 3.0}, -1.0), ValidationError);
    const RadialGrid rg{0.5, 2.0, 3};
    CHECK_THROWS_AS(RadialField(rg, {0.0, std::numeric_limits<double>::infinity(), 0.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(RadialField(rg, {0.0, 1.0, 0.0}, -0.5), ValidationError);
    CHECK_NOTHROW(RadialField(rg, {0.0, 1.0, 0.0}, 0.0));
}

TEST_CASE("quad_trapezoid on a LineField") {
    for (std::size_t n : {1u, 7u, 64u, 1000u}) {
        const LineGrid g{0.0, 1.0, n};
        const LineField one(g, std::vector<double>(n, 1.0), 0.0);
        CHECK(quad_trapezoid(one, [](double) { return 1.0; }) == Approx(1.0).epsilon(1e-14));
        std::vector<double> s(n);
        for (std::size_t j = 0; j < n; ++j) s[j] = g.center(j);
        const LineField lin(g, s, 0.0);
        CHECK(quad_trapezoid(lin, [](double) { return 1.0; }) == Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("quad_trapezoid on the Bump over [0.25, 2] with weight 1/r matches the oracle") {
    const double exact = oracle::gauss([](double r) { return oracle::bump(r) / r; }, 0.5, 1.5);
    for (std::size_t n : {4001u, 8001u, 16001u}) {
        const RadialGrid g{0.25, 2.0, n};
        const RadialField u = InitialCondition::bump().sample(g);
        CHECK(std::abs(quad_trapezoid(u, [](double r) { return 1.0 / r; }) - exact) < 1e-6);
    }
}

TEST_CASE("trapezoid quadrature converges at second order on smooth data") {
    auto f = [](double r) { return std::exp(-r) * r; };
    const double exact = oracle::gauss(f, 0.1, 3.0);
    double prev = 0.0;
    for (std::size_t n : {65u, 129u, 257u, 513u}) {
        const RadialGrid g{0.1, 3.0, n};
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = f(g.node(i));
        const double err = std::abs(quad_trapezoid(RadialField(g, v, 0.0), [](double) { return 1.0; }) - exact);
        if (prev > 0.0) CHECK(prev / err >= 3.5);
        prev = err;
    }
}

TEST_CASE("integrate_adaptive agrees with the Gauss-Legendre oracle") {
    auto f = [](double x) { return std::sqrt(std::max(x, 0.0)) * std::cos(3.0 * x); };
    CHECK(integrate_adaptive(f, 0.0, 2.0, 1e-12) == Approx(oracle::gauss(f, 0.0, 2.0, 20000)).epsilon(1e-9));
    CHECK(integrate_adaptive(f, 1.0, 1.0, 1e-12) == 0.0);
}

TEST_CASE("initial conditions") {
    const auto bump = InitialCondition::bump();
    CHECK(bump.at_origin() == 0.0);
    CHECK(bump(1.0) == 0.25);
    CHECK(bump(0.5) == 0.0);
    CHECK(bump(2.0) == 0.0);

    const auto pl = InitialCondition::plateau(2.0, 0.5, 1.0);
    CHECK(pl.at_origin() == 2.0);
    CHECK(pl(0.5) == 2.0);
    CHECK(pl(0.75) == Approx(1.0));
    CHECK(pl(1.0) == Approx(0.0));
    CHECK(pl(3.0) == 0.0);
    for (double r = 0.0; r < 1.2; r += 0.01) {
        CHECK(pl(r) <= 2.0);
        CHECK(pl(r) >= pl(r + 0.01));
    }
    CHECK_THROWS_AS(InitialCondition::plateau(0.0), ValidationError);
    CHECK_THROWS_AS(InitialCondition::plateau(1.0, 1.0, 0.5), ValidationError);

    const auto c = InitialCondition::custom({0.5, 1.0, 1.5}, {0.5, 1.0, 0.0});
    CHECK(c.at_origin() == 0.5);
    CHECK(c(0.75) == Approx(0.75));
    CHECK(c(1.25) == Approx(0.5));
    CHECK(c(2.0) == 0.0);
    CHECK_THROWS_AS(InitialCondition::custom({1.0, 0.5}, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(InitialCondition::custom({0.5}, {-1.0}), ValidationError);
}

TEST_CASE("MultiGraph polyline fills jumps and interval_at interpolates") {
    const MultiGraph g({{0.0, 0.0, 0.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 1.0}});
    const auto pts = g.polyline();
    REQUIRE(pts.size() == 4);
    CHECK(pts[1].y == 0.0);  // entered from the low end, nearer the previous point
    CHECK(pts[2].y == 1.0);
    CHECK(g.interval_at(1.0) == std::pair<double, double>{0.0, 1.0});
    CHECK(g.interval_at(0.5).first == 0.0);
    CHECK(g.interval_at(1.5).first == 1.0);
    CHECK_THROWS_AS(g.interval_at(2.5), ValidationError);
    CHECK_THROWS_AS(MultiGraph({{0.0, 1.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(MultiGraph({{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}), ValidationError);

    const MultiGraph c = g.clipped(0.5, 1.5);
    REQUIRE(c.size() == 3);
    CHECK(c.x_min() == 0.5);
    CHECK(c.x_max() == 1.5);
    CHECK(c.samples()[2].lo == 1.0);
    CHECK_THROWS_AS(g.clipped(3.0, 4.0), ValidationError);
}
