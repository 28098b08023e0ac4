#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dsnw/errors.hpp"
#include "dsnw/geometry.hpp"
#include "dsnw/modes.hpp"
#include "dsnw/specfun.hpp"

using namespace dsnw;
using std::numbers::pi;

namespace {
double parity(int k) { return (k % 2) ? -1.0 : 1.0; }
}

TEST_CASE("state coefficients container") {
    StateCoefficients s(3);
    CHECK(s.size() == 16);
    CHECK_THROWS_AS(s.at(2, 3), IndexError);
    CHECK(s.get(5, 0) == cplx{});
    s.at(1, -1) = cplx(3.0, 4.0);
    CHECK(s.norm() == doctest::Approx(5.0));
    CHECK_FALSE(s.is_normalized());
    const auto n = s.normalized();
    CHECK(n.is_normalized());
    CHECK(std::abs(n.norm() - 1.0) < 1e-15);
    CHECK_THROWS_AS(StateCoefficients(2).normalized(), std::invalid_argument);
    const auto r1 = StateCoefficients::random(4, 7), r2 = StateCoefficients::random(4, 7);
    CHECK(r1.max_abs_diff(r2) == 0.0);
    CHECK(r1.max_abs_diff(StateCoefficients::random(4, 8)) > 0.0);
    CHECK(r1.resized(6).resized(4).max_abs_diff(r1) == 0.0);
}

TEST_CASE("sphere grid weights and exactness") {
    const auto g = SphereGrid::make(12, 25);
    CHECK(std::abs(g.total_weight() - 4 * pi) < 1e-13);
    CHECK(g.bandwidth() == 11);
    // integral of |Y_11^5|^2 is exact
    double s = 0.0;
    for (int i = 0; i < g.n_theta; ++i)
        for (int j = 0; j < g.n_phi; ++j) s += g.weight(i, j) * std::norm(spherical_harmonic(11, 5, g.theta[i], g.phi[j]));
    CHECK(std::abs(s - 1.0) < 1e-13);
}

TEST_CASE("modes: fixture-independent identities") {
    for (double M : {0.5, 2.5}) {
        const auto p = DeSitterParams::make(M);
        for (int l = 0; l <= 3; ++l)
            for (int m = -l; m <= l; ++m)
                for (double t : {-0.8, 0.0, 0.6}) {
                    const SpacetimePoint x{t, 0.9, 2.2};
                    // conj(v_{l,m}) = (-1)^m u_{l,-m}
                    CHECK(std::abs(std::conj(mode_v(p, l, m, x)) - parity(m) * mode_u(p, l, -m, x)) < 1e-12);
                    CHECK(std::abs(std::abs(mode_u(p, l, m, x)) - std::abs(mode_u(p, l, -m, x))) < 1e-13);
                }
        const SpacetimePoint x0{0.0, 0.4, 1.0};
        CHECK(std::abs(mode_v(p, 0, 0, x0) - std::conj(mode_u(p, 0, 0, x0))) < 1e-14);
    }
}

TEST_CASE("analytic time derivative matches finite differences") {
    const auto p = DeSitterParams::make(2.5, 1.5);
    for (int l : {0, 2, 4})
        for (double t : {-1.0, 0.3, 2.0}) {
            auto R = [&](double s) { return mode_radial(p, l, s).R; };
            const cplx fd = fd5_first(R, t, 1e-3);
            CHECK(std::abs(fd - mode_radial(p, l, t).dR) < 1e-9 * (1.0 + std::abs(fd)));
        }
}

TEST_CASE("superpose is linear and reduces to a single mode") {
    const auto p = DeSitterParams::make(2.5);
    const SpacetimePoint x{0.2, 1.3, 0.7};
    CHECK(std::abs(superpose(p, StateCoefficients::single(3, 0, 0), x) - mode_u(p, 0, 0, x)) < 1e-15);
    const auto a = StateCoefficients::random(3, 1), b = StateCoefficients::random(3, 2);
    const cplx ca(0.3, -1.0), cb(2.0, 0.5);
    const auto s = ca * a + cb * b;
    CHECK(std::abs(superpose(p, s, x) - (ca * superpose(p, a, x) + cb * superpose(p, b, x))) < 1e-13);
    const Field f = state_field(p, a);
    CHECK(std::abs(f.value(x) - superpose(p, a, x)) < 1e-14);
}

TEST_CASE("inner product properties") {
    const auto p = DeSitterParams::make(2.5);
    const auto grid = SphereGrid::make(8, 16);
    const Field u = mode_field(p, 2, 1);
    for (double t : {0.0, 0.7}) {
        const auto r = inner_product(p, u, u, t, grid);
        CHECK_FALSE(r.under_resolved);
        CHECK(std::abs(r.value - 1.0) < 1e-8);
    }
    const auto f = sample_state(p, StateCoefficients::random(3, 3), 0.4, grid);
    const auto g = sample_state(p, StateCoefficients::random(3, 4), 0.4, grid);
    auto conj_s = [](SliceSamples s) {
        for (auto& v : s.value) v = std::conj(v);
        for (auto& v : s.dt) v = std::conj(v);
        return s;
    };
    CHECK(std::abs(inner_product(p, conj_s(g), conj_s(f), 0.4, grid) + inner_product(p, f, g, 0.4, grid)) < 1e-12);
    SliceSamples g2 = g;
    const cplx a(0.5, 2.0);
    for (auto& v : g2.value) v *= a;
    for (auto& v : g2.dt) v *= a;
    CHECK(std::abs(inner_product(p, f, g2, 0.4, grid) - a * inner_product(p, f, g, 0.4, grid)) < 1e-12);
    // a coarse grid flags under-resolution
    CHECK(inner_product(p, mode_field(p, 9, 0), u, 0.0, SphereGrid::make(4, 8)).under_resolved);
}

TEST_CASE("Gram matrices, both branches and both series") {
    const auto grid = SphereGrid::make(10, 20);
    for (double M : {0.5, 2.5})
        for (double t : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
            const auto p = DeSitterParams::make(M);
            CHECK(max_deviation(orthonormality_matrix(p, 4, t, grid, Sector::UU), 1.0) < 1e-8);
            CHECK(max_deviation(orthonormality_matrix(p, 4, t, grid, Sector::VV), -1.0) < 1e-8);
            CHECK(max_deviation(orthonormality_matrix(p, 4, t, grid, Sector::UV), 0.0) < 1e-8);
            const auto q = DeSitterParams::make(M, 1.0, NuBranch::Minus);
            const auto G1 = orthonormality_matrix(p, 4, t, grid), G2 = orthonormality_matrix(q, 4, t, grid);
            CHECK((G1 - G2).cwiseAbs().maxCoeff() < 1e-8);
        }
    CHECK_THROWS_AS(orthonormality_matrix(DeSitterParams::make(2.5), 6, 0.0, SphereGrid::make(5, 10)),
                    std::invalid_argument);
}

TEST_CASE("KG residual of modes, l <= 4") {
    for (double M : {0.5, 2.5}) {
        const auto p = DeSitterParams::make(M);
        for (int l = 0; l <= 4; ++l)
            for (int m : {0, l}) {
                for (Energy e : {Energy::Positive, Energy::Negative}) {
                    const Field f = mode_field(p, l, m, e);
                    const SpacetimePoint x{0.3, 1.0, 0.5};
                    CHECK(std::abs(kg_operator_fd(p, f.value, x, FdSteps::defaults(p))) <=
                          1e-5 * std::abs(f.value(x)));
                }
            }
    }
}

TEST_CASE("two-point partial sum") {
    const auto p = DeSitterParams::make(2.5);
    // at the pole only m = 0 contributes
    const auto a = two_point_G(p, {0.3, 0.0, 1.7}, -0.2, 10);
    cplx s{};
    for (int l = 0; l <= 10; ++l)
        s += mode_u(p, l, 0, {0.3, 0.0, 0.0}) * std::conj(mode_u(p, l, 0, {-0.2, 0.0, 0.0}));
    CHECK(std::abs(a.value - s) < 1e-13);
    const auto b = two_point_G(p, {-0.2, 0.0, 0.0}, 0.3, 10);
    CHECK(std::abs(a.value - std::conj(b.value)) < 1e-13);
    CHECK(std::abs(a.last_shell) > 0.0);
}

TEST_CASE("large-mass product approximation") {
    const auto p = DeSitterParams::make(100.0);
    const auto grid = SphereGrid::make(6, 12);
    const auto u00 = StateCoefficients::single(2, 0, 0);
    const auto [ex, ap] = large_mass_product_check(p, u00, u00, 0.0, grid);
    CHECK(std::abs(ex - ap) / std::abs(ex) < 0.05);
    const auto [e2, a2] =
        large_mass_product_check(p, StateCoefficients::single(2, 1, 0), StateCoefficients::single(2, 2, 0), 0.0, grid);
    CHECK(std::abs(e2) < 1e-12);
    CHECK(std::abs(a2) < 1e-12);
    const auto c = DeSitterParams::make(0.5);
    const auto [e3, a3] = large_mass_product_check(c, u00, u00, 0.0, grid);
    MESSAGE("M = 0.5: exact " << e3 << ", large-mass form " << a3);
    CHECK(std::abs(e3 - a3) / std::abs(e3) > 0.05);
}
