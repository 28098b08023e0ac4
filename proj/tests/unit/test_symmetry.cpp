#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dsnw/errors.hpp"
#include "dsnw/modes.hpp"
#include "dsnw/specfun.hpp"
#include "dsnw/symmetry.hpp"

using namespace dsnw;
using std::numbers::pi;

namespace {

const GeneratorId kAll[] = {GeneratorId::N12, GeneratorId::N23, GeneratorId::N31,
                            GeneratorId::N01, GeneratorId::N02, GeneratorId::N03};

SpacetimePoint rotate_back(const std::array<std::array<double, 3>, 3>& R, const SpacetimePoint& p) {
    const double x[3] = {std::sin(p.theta) * std::cos(p.phi), std::sin(p.theta) * std::sin(p.phi), std::cos(p.theta)};
    double y[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) y[i] += R[j][i] * x[j];  // R^T x
    double ph = std::atan2(y[1], y[0]);
    if (ph < 0) ph += 2 * pi;
    return {p.t, std::acos(std::clamp(y[2], -1.0, 1.0)), ph};
}

}  // namespace

TEST_CASE("names round-trip") {
    for (GeneratorId g : kAll) CHECK(generator_from_string(to_string(g)) == g);
    CHECK_THROWS_AS(generator_from_string("N13"), std::invalid_argument);
    CHECK(to_string(Discrete::P3) == "P3");
}

TEST_CASE("discrete symmetries on coefficients") {
    const auto p = DeSitterParams::make(2.5);
    const auto s = StateCoefficients::random(5, 11);
    for (Discrete d : {Discrete::P1, Discrete::P2, Discrete::P3, Discrete::P, Discrete::T})
        CHECK(apply_discrete(d, p, apply_discrete(d, p, s)).max_abs_diff(s) < 1e-15);
    const auto e = apply_discrete(Discrete::P3, p, StateCoefficients::single(2, 1, 0));
    CHECK(e.at(1, 0) == cplx(-1.0));
    CHECK(std::abs(apply_discrete(Discrete::T, p, s).norm() - 1.0) < 1e-14);
}

TEST_CASE("discrete symmetries act as the geometric maps on the field") {
    for (double M : {0.5, 2.5}) {
        const auto p = DeSitterParams::make(M);
        const auto s = StateCoefficients::random(4, 5);
        for (Discrete d : {Discrete::P1, Discrete::P2, Discrete::P3, Discrete::P}) {
            const auto ds = apply_discrete(d, p, s);
            for (SpacetimePoint x : {SpacetimePoint{0.3, 0.7, 1.1}, SpacetimePoint{-1.0, 2.0, 4.5}})
                CHECK(std::abs(superpose(p, ds, x) - superpose(p, s, reflect_point(d, x))) < 1e-10);
        }
        const auto ts = apply_discrete(Discrete::T, p, s);
        for (SpacetimePoint x : {SpacetimePoint{0.3, 0.7, 1.1}, SpacetimePoint{-1.0, 2.0, 4.5}})
            CHECK(std::abs(superpose(p, ts, x) - std::conj(superpose(p, s, reflect_point(Discrete::T, x)))) < 1e-10);
    }
}

TEST_CASE("generator chart components") {
    const auto p = DeSitterParams::make(2.5, 1.4);
    const SpacetimePoint x{0.5, 1.2, 0.7};
    const auto n03 = generator_chart_components(GeneratorId::N03, p, x);
    CHECK(std::abs(n03[0] - 1.4 * std::cos(1.2)) < 1e-13);
    CHECK(std::abs(n03[1] + std::tanh(0.5 / 1.4) * std::sin(1.2)) < 1e-13);
    CHECK(std::abs(n03[2]) < 1e-13);
    const auto n12 = generator_chart_components(GeneratorId::N12, p, x);
    CHECK(std::abs(n12[2] + 1.0) < 1e-13);
    CHECK(std::abs(n12[0]) + std::abs(n12[1]) < 1e-13);
    CHECK(is_boost(GeneratorId::N02));
    CHECK_FALSE(is_boost(GeneratorId::N31));
}

TEST_CASE("generators on modes and radial functions") {
    const auto p = DeSitterParams::make(2.5);
    const SpacetimePoint x{0.3, 1.0, 0.4};
    for (int l = 1; l <= 3; ++l)
        for (int m = -l; m <= l; ++m) {
            const Field u = mode_field(p, l, m);
            const cplx want = cplx(0.0, -m) * u.value(x);
            CHECK(std::abs(apply_generator_fd(GeneratorId::N12, p, u.value, x) - want) <= 1e-6 * std::abs(u.value(x)) + 1e-12);
        }
    const FieldSampler radial = [](const SpacetimePoint& q) { return cplx(std::cos(q.t), std::sin(2 * q.t)); };
    for (GeneratorId g : {GeneratorId::N12, GeneratorId::N23, GeneratorId::N31})
        CHECK(std::abs(apply_generator_fd(g, p, radial, x)) < 1e-10);
    CHECK_THROWS_AS(apply_generator_fd(GeneratorId::N23, p, radial, {0.0, 2e-4, 0.0}), SingularChartError);
}

TEST_CASE("Lie algebra closure on a probe function") {
    const auto p = DeSitterParams::make(2.5);
    const Field u = mode_field(p, 1, 0);
    const SpacetimePoint x{0.2, 1.1, 0.6};
    const double h = kNestedGeneratorStep;
    auto N = [&](GeneratorId g, FieldSampler f) { return generator_sampler(g, p, std::move(f), h); };
    const cplx ab = N(GeneratorId::N12, N(GeneratorId::N23, u.value))(x);
    const cplx ba = N(GeneratorId::N23, N(GeneratorId::N12, u.value))(x);
    const cplx c = apply_generator_fd(GeneratorId::N31, p, u.value, x, h);
    CHECK(std::abs(ab - ba - c) < 1e-4);
}

TEST_CASE("ladder selection rules for every generator") {
    const auto grid = SphereGrid::make(8, 16);
    for (double M : {0.5, 2.5}) {
        const auto p = DeSitterParams::make(M);
        for (GeneratorId g : kAll)
            for (auto [l, m] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{2, -1}}) {
                const auto rep = ladder_coefficients(g, p, l, m, 0.3, grid);
                CHECK(rep.selection_rules_hold(1e-6));
            }
        const auto r12 = ladder_coefficients(GeneratorId::N12, p, 2, 1, 0.3, grid);
        for (const auto& e : r12.entries) {
            const cplx want = (e.l == 2 && e.m == 1) ? cplx(0.0, -1.0) : cplx{};
            CHECK(std::abs(e.value - want) < 1e-6);
        }
        const auto r03 = ladder_coefficients(GeneratorId::N03, p, 0, 0, 0.3, grid);
        for (const auto& e : r03.entries)
            if (!(e.l == 1 && e.m == 0)) CHECK(std::abs(e.value) < 1e-6);
        CHECK(std::abs(r03.entry(1, 0)) > 1e-2);
    }
    CHECK_THROWS_AS(ladder_coefficients(GeneratorId::N03, DeSitterParams::make(2.5), 6, 0, 0.0, grid),
                    std::invalid_argument);
}

TEST_CASE("boost ladder coefficient magnitude") {
    // |<u_{l+1,m}, N03 u_{l,m}>| = sqrt(((l+1)^2 - m^2) ((l+1)^2 + M^2 - 1) / ((2l+1)(2l+3)))
    const auto grid = SphereGrid::make(8, 16);
    for (double M : {0.5, 2.5}) {
        const auto p = DeSitterParams::make(M);
        for (auto [l, m] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{2, 1}}) {
            const auto rep = ladder_coefficients(GeneratorId::N03, p, l, m, 0.4, grid);
            const double k = l + 1.0;
            const double want = std::sqrt((k * k - m * m) * (k * k + M * M - 1.0) / ((2 * l + 1.0) * (2 * l + 3.0)));
            CHECK(std::abs(std::abs(rep.entry(l + 1, m)) - want) < 1e-6);
        }
    }
}

TEST_CASE("Casimir estimates") {
    for (double M : {0.5, 2.5}) {
        const auto p = DeSitterParams::make(M);
        for (int l = 0; l <= 3; ++l)
            for (int m = -l; m <= l; ++m) {
                const auto c = casimir_check(p, l, m, {0.2, 1.1, 0.4});
                CHECK(std::abs(c.q - M * M) / (M * M) < 1e-3);
                CHECK(std::abs(c.r) < 1e-4);
            }
    }
    // u_{1,0} vanishes on the equator
    CHECK_THROWS_AS(casimir_check(DeSitterParams::make(2.5), 1, 0, {0.0, pi / 2, 0.3}), DomainError);
}

TEST_CASE("rotations of states") {
    const auto p = DeSitterParams::make(2.5);
    const auto s = StateCoefficients::random(6, 9);
    CHECK(rotate_state(p, s, 0.0, 0.0, 0.0).max_abs_diff(s) < 1e-15);
    const auto r = rotate_state(p, s, 0.4, 1.2, -0.7);
    CHECK(std::abs(r.norm() - 1.0) < 1e-12);
    const auto R = rotation_matrix(0.4, 1.2, -0.7);
    for (SpacetimePoint x : {SpacetimePoint{0.2, 0.5, 0.3}, SpacetimePoint{-0.6, 2.4, 5.1}})
        CHECK(std::abs(superpose(p, r, x) - superpose(p, s, rotate_back(R, x))) < 1e-9);
}
