#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pmelab/profiles.hpp"

using namespace pmelab;
using doctest::Approx;

TEST_CASE("profile kinds round trip through their names") {
    for (auto k : {ProfileKind::F, ProfileKind::W, ProfileKind::EK, ProfileKind::V, ProfileKind::BD,
                   ProfileKind::TildeEK, ProfileKind::TildeF, ProfileKind::TildeBD}) {
        CHECK(profile_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(profile_kind_from_string("G"), ValidationError);
    CHECK(constant_of(ProfileKind::EK) == ProfileConstant::K);
    CHECK(constant_of(ProfileKind::W) == ProfileConstant::k);
    CHECK(constant_of(ProfileKind::TildeBD) == ProfileConstant::D);
    CHECK(is_line_profile(ProfileKind::V));
    CHECK_FALSE(is_line_profile(ProfileKind::BD));
}

TEST_CASE("specs require their own constant") {
    const auto p = make_parameters(2.0, 3);
    ProfileSpec s;
    s.kind = ProfileKind::EK;
    s.params = p;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.k = 1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.k.reset();
    s.K = -1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.K = 1.0;
    CHECK_NOTHROW(s.validate());
    CHECK_THROWS_AS(ProfileSpec::make(ProfileKind::F, p, 0.0), ValidationError);
    CHECK_NOTHROW(ProfileSpec::make(ProfileKind::BD, p, -3.0));
}

TEST_CASE("F, W, EK, V and B_D against their formulas") {
    const double m = 3.0;
    const auto p = make_parameters(m, 3);
    const double k = 0.59362, K = 2.0, D = -0.37389;
    const auto F = ProfileSpec::make(ProfileKind::F, p, k);
    const auto W = ProfileSpec::make(ProfileKind::W, p, k);
    const auto EK = ProfileSpec::make(ProfileKind::EK, p, K);
    const auto V = ProfileSpec::make(ProfileKind::V, p, K);
    const auto BD = ProfileSpec::make(ProfileKind::BD, p, D);
    for (double t : {0.5, 1.0, 7.0}) {
        const double R = std::pow(t, 1.0 / m);
        for (double y = 0.01; y < 1.5; y += 0.013) {
            const double r = std::exp(-y * R);
            const double f = y < k ? std::sqrt(y / m) / R : 0.0;
            CHECK(eval_F(F, r, t) == Approx(f).epsilon(1e-12).scale(1e-15));
            CHECK(eval_W(W, y * R, t) == Approx(f).epsilon(1e-12).scale(1e-15));
            const double s = y * R;
            const double ek = s >= m * K * K * t ? K : std::sqrt(s / (m * t));
            CHECK(eval_EK(EK, std::exp(-s), t) == Approx(ek).epsilon(1e-12));
            CHECK(eval_V(V, s, t) == Approx(ek).epsilon(1e-12));
            CHECK(eval_BD(BD, r, t) == Approx(oracle::BD(D, m, 3, r, t)).epsilon(1e-12).scale(1e-15));
        }
        CHECK(eval_F(F, 1.5, t) == 0.0);
        CHECK(eval_W(W, -0.1, t) == 0.0);
        CHECK(eval_EK(EK, 1.0, t) == 0.0);
        CHECK(eval_V(V, 0.0, t) == 0.0);
    }
}

TEST_CASE("log evaluators reach radii that underflow") {
    const auto p = make_parameters(2.0, 3);
    const auto EK = ProfileSpec::make(ProfileKind::EK, p, 1.0);
    CHECK(eval_EK_log(EK, -1000.0, 1.0) == 1.0);
    const auto BD = ProfileSpec::make(ProfileKind::BD, p, 0.0);
    CHECK(eval_BD_log(BD, -800.0, 1.0) == Approx(400.0));
}

TEST_CASE("F places its jump at k_F = (N-2)^{2/m-1} k") {
    const auto p = make_parameters(2.5, 5);
    const double k = 0.7;
    const double kF = k * std::pow(3.0, 2.0 / 2.5 - 1.0);
    CHECK(k_radial(k, p) == Approx(kF));
    const auto F = ProfileSpec::make(ProfileKind::F, p, k);
    CHECK(eval_F_log(F, -kF * 1.0001, 1.0) == 0.0);
    CHECK(eval_F_log(F, -kF * 0.9999, 1.0) > 0.0);
}

TEST_CASE("tilde profiles are the density inversions") {
    const auto p = make_parameters(2.0, 4);
    for (auto [base, tilde, c] : {std::tuple{ProfileKind::EK, ProfileKind::TildeEK, 1.5},
                                  std::tuple{ProfileKind::F, ProfileKind::TildeF, 0.9},
                                  std::tuple{ProfileKind::BD, ProfileKind::TildeBD, -0.2}}) {
        const auto b = ProfileSpec::make(base, p, c);
        const auto t = ProfileSpec::make(tilde, p, c);
        for (double r = 0.3; r < 20.0; r *= 1.17) {
            CHECK(eval_tilde(t, r, 1.3) == Approx(std::pow(r, -1.0) * eval_profile(b, 1.0 / r, 1.3)).scale(1e-14));
        }
    }
}

TEST_CASE("mass_W matches quadrature and solve_k inverts it") {
    for (double m : {1.5, 2.0, 3.0, 5.0}) {
        const auto p = make_parameters(m, 3);
        for (double k : {0.1, 0.59362, 2.0}) {
            // y = k z^4 removes the endpoint singularity
            const double q = oracle::gauss(
                [&](double z) { return std::pow(k * z * z * z * z / m, 1.0 / (m - 1.0)) * 4.0 * k * z * z * z; }, 0.0, 1.0);
            CHECK(mass_W(k, p) == Approx(q).epsilon(1e-9));
        }
        const double M = 2.2122;
        const double k = solve_k(M, p);
        CHECK(mass_W(k, p) == Approx((p.N - 2) * M / p.omega1).epsilon(1e-13));
        CHECK(solve_k_quadrature(M, p) == Approx(k).epsilon(1e-10));
    }
}

TEST_CASE("bump data for m = N = 3") {
    const auto p = make_parameters(3.0, 3);
    const double M = 4.0 * std::numbers::pi * oracle::gauss([](double r) { return oracle::bump(r) / r; }, 0.5, 1.5);
    CHECK(M == Approx(2.2122).epsilon(1e-4));
    CHECK(solve_k(M, p) == Approx(0.59362).epsilon(1e-4));
    const double l12 = 4.0 * std::numbers::pi * oracle::gauss(oracle::bump, 0.5, 1.5);
    CHECK(l12 == Approx(2.0 * std::numbers::pi / 3.0).epsilon(1e-12));
    CHECK(solve_D(l12, p) == Approx(-0.37389).epsilon(1e-4));
}

TEST_CASE("l12_mass_BD agrees with the closed form and is time independent") {
    for (auto [m, N] : {std::pair{3.0, 3}, std::pair{2.0, 4}, std::pair{1.5, 6}}) {
        const auto p = make_parameters(m, N);
        for (double D : {-1.0, -0.37389, 0.0, 0.8}) {
            const double ref = oracle::l12_mass_BD(D, m, N);
            CHECK(l12_mass_BD(D, p) == Approx(ref).epsilon(1e-10));
            CHECK(l12_mass_BD(D, p, 13.0) == Approx(ref).epsilon(1e-10));
            CHECK(solve_D(ref, p) == Approx(D).scale(1.0).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(solve_D(-1.0, make_parameters(2.0, 3)), ValidationError);
}

TEST_CASE("graphs carry the jump as a vertical segment") {
    const auto p = make_parameters(2.0, 3);
    const double k = 1.0;
    const auto F = ProfileSpec::make(ProfileKind::F, p, k);
    const std::vector<double> y{0.25, 0.5, 1.0, 1.5};
    const MultiGraph g = stationary_graph_Fbar(F, y);
    REQUIRE(g.size() == 4);
    CHECK(g.samples()[0].lo == Approx(0.125));
    CHECK(g.samples()[2].lo == 0.0);
    CHECK(g.samples()[2].hi == Approx(0.5));
    CHECK(g.samples()[3].hi == 0.0);

    const auto W = ProfileSpec::make(ProfileKind::W, p, k);
    const std::vector<double> s{0.5, 2.0, 3.0};
    const MultiGraph gw = graph_W(W, 4.0, s);  // jump at s = 2
    CHECK(gw.samples()[1].lo == 0.0);
    CHECK(gw.samples()[1].hi == Approx(0.25));
    CHECK(gw.samples()[0].lo == Approx(0.0625));
}

TEST_CASE("sampling matches pointwise evaluation") {
    const auto p = make_parameters(3.0, 3);
    const auto BD = ProfileSpec::make(ProfileKind::BD, p, -0.37389);
    const RadialGrid g{1e-3, 10.0, 200};
    const RadialField f = sample_radial(BD, g, 2.0);
    CHECK(f.t() == 2.0);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(f[i] == Approx(eval_BD(BD, g.node(i), 2.0)));
    const auto V = ProfileSpec::make(ProfileKind::V, p, 1.0);
    const LineGrid lg{-1.0, 5.0, 60};
    const LineField lf = sample_line(V, lg, 1.0);
    for (std::size_t j = 0; j < lg.n; ++j) CHECK(lf[j] == Approx(eval_V(V, lg.center(j), 1.0)));
    CHECK_THROWS_AS(sample_line(BD, lg, 1.0), ValidationError);
    CHECK_THROWS_AS(sample_radial(V, g, 1.0), ValidationError);
}
