#include "dsnw/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dsnw/errors.hpp"
#include "dsnw/specfun.hpp"

namespace dsnw {

namespace {
constexpr double kPi = std::numbers::pi;
double parity(int k) { return (k % 2) ? -1.0 : 1.0; }
}  // namespace

std::string to_string(Discrete d) {
    switch (d) {
        case Discrete::P1: return "P1";
        case Discrete::P2: return "P2";
        case Discrete::P3: return "P3";
        case Discrete::P: return "P";
        case Discrete::T: return "T";
    }
    return "?";
}

std::string to_string(GeneratorId g) {
    switch (g) {
        case GeneratorId::N12: return "N12";
        case GeneratorId::N23: return "N23";
        case GeneratorId::N31: return "N31";
        case GeneratorId::N01: return "N01";
        case GeneratorId::N02: return "N02";
        case GeneratorId::N03: return "N03";
    }
    return "?";
}

GeneratorId generator_from_string(const std::string& name) {
    for (GeneratorId g : {GeneratorId::N12, GeneratorId::N23, GeneratorId::N31, GeneratorId::N01, GeneratorId::N02,
                          GeneratorId::N03})
        if (to_string(g) == name) return g;
    throw std::invalid_argument("unknown generator: " + name);
}

bool is_boost(GeneratorId g) { return g == GeneratorId::N01 || g == GeneratorId::N02 || g == GeneratorId::N03; }

StateCoefficients apply_discrete(Discrete sym, const DeSitterParams& params, const StateCoefficients& state) {
    (void)params;
    StateCoefficients out(state.l_max());
    for (int l = 0; l <= state.l_max(); ++l) {
        for (int m = -l; m <= l; ++m) {
            cplx v{};
            switch (sym) {
                case Discrete::P1: v = state.at(l, -m); break;
                case Discrete::P2: v = parity(m) * state.at(l, -m); break;
                case Discrete::P3: v = parity(l + m) * state.at(l, m); break;
                case Discrete::P: v = parity(l) * state.at(l, m); break;
                case Discrete::T: v = parity(m) * std::conj(state.at(l, -m)); break;
            }
            out.at(l, m) = v;
        }
    }
    if (state.is_normalized()) out.mark_normalized();
    return out;
}

SpacetimePoint reflect_point(Discrete sym, const SpacetimePoint& p) {
    auto wrap = [](double phi) {
        double r = std::fmod(phi, 2.0 * kPi);
        return r < 0 ? r + 2.0 * kPi : r;
    };
    switch (sym) {
        case Discrete::P1: return {p.t, p.theta, wrap(kPi - p.phi)};
        case Discrete::P2: return {p.t, p.theta, wrap(-p.phi)};
        case Discrete::P3: return {p.t, kPi - p.theta, p.phi};
        case Discrete::P: return {p.t, kPi - p.theta, wrap(p.phi + kPi)};
        case Discrete::T: return {-p.t, p.theta, p.phi};
    }
    return p;
}

Vec4 killing_vector(GeneratorId gen, const Vec4& X) {
    Vec4 V{0.0, 0.0, 0.0, 0.0};
    // N_ij = -(X^i d_j - X^j d_i), N_0k = X^k d_0 + X^0 d_k
    auto rot = [&](int i, int j) {
        V[j] = -X[i];
        V[i] = X[j];
    };
    auto boost = [&](int k) {
        V[0] = X[k];
        V[k] = X[0];
    };
    switch (gen) {
        case GeneratorId::N12: rot(1, 2); break;
        case GeneratorId::N23: rot(2, 3); break;
        case GeneratorId::N31: rot(3, 1); break;
        case GeneratorId::N01: boost(1); break;
        case GeneratorId::N02: boost(2); break;
        case GeneratorId::N03: boost(3); break;
    }
    return V;
}

std::array<double, 3> generator_chart_components(GeneratorId gen, const DeSitterParams& params,
                                                 const SpacetimePoint& p) {
    return tangent_to_chart(params, p, killing_vector(gen, embed(params, p)));
}

cplx apply_generator_fd(GeneratorId gen, const DeSitterParams& params, const FieldSampler& f,
                        const SpacetimePoint& p, double h) {
    if (p.theta < 4.0 * h || p.theta > kPi - 4.0 * h) throw SingularChartError("generator stencil reaches a pole");
    const auto v = generator_chart_components(gen, params, p);
    cplx out{};
    if (v[0] != 0.0) {
        auto along = [&](double x) { return f(SpacetimePoint{x, p.theta, p.phi}); };
        out += v[0] * fd5_first(along, p.t, h * params.alpha);
    }
    if (v[1] != 0.0) {
        auto along = [&](double x) { return f(SpacetimePoint{p.t, x, p.phi}); };
        out += v[1] * fd5_first(along, p.theta, h);
    }
    if (v[2] != 0.0) {
        auto along = [&](double x) { return f(SpacetimePoint{p.t, p.theta, x}); };
        out += v[2] * fd5_first(along, p.phi, h);
    }
    return out;
}

FieldSampler generator_sampler(GeneratorId gen, const DeSitterParams& params, FieldSampler f, double h) {
    return [gen, params, f = std::move(f), h](const SpacetimePoint& p) {
        return apply_generator_fd(gen, params, f, p, h);
    };
}

cplx LadderReport::entry(int lp, int mp) const {
    for (const auto& e : entries)
        if (e.l == lp && e.m == mp) return e.value;
    return cplx{};
}

LadderReport ladder_coefficients(GeneratorId gen, const DeSitterParams& params, int l, int m, double t,
                                 const SphereGrid& grid) {
    if (l < 0 || std::abs(m) > l) throw IndexError("mode index out of range");
    const int L = l + 2;
    if (grid.bandwidth() < L) throw std::invalid_argument("grid bandwidth must be at least l + 2");

    const Field u = mode_field(params, l, m);
    Field g;
    g.value = generator_sampler(gen, params, u.value, kGeneratorStep);
    g.bandwidth = l + 1;
    SliceSamples gs = sample_field(g, t, grid);

    LadderReport rep;
    rep.generator = gen;
    rep.M = params.M;
    rep.l = l;
    rep.m = m;
    for (int lp = 0; lp <= L; ++lp) {
        for (int mp = -lp; mp <= lp; ++mp) {
            const SliceSamples up = sample_mode(params, lp, mp, t, grid);
            const cplx c = inner_product(params, up, gs, t, grid);
            const bool listed = std::abs(lp - l) <= 1 && std::abs(mp - m) <= 1;
            if (listed) rep.entries.push_back({lp, mp, c});
            else rep.max_outside = std::max(rep.max_outside, std::abs(c));
        }
    }
    return rep;
}

CasimirEstimate casimir_check(const DeSitterParams& params, int l, int m, const SpacetimePoint& p, double h) {
    const Field u = mode_field(params, l, m);
    const cplx u0 = u.value(p);
    const double umax = std::abs(mode_radial(params, l, p.t).R) * std::sqrt((2.0 * l + 1.0) / (4.0 * kPi));
    if (std::abs(u0) < 1e-3 * umax) throw DomainError("|u(p)| too small for a stable ratio; choose another probe point");

    auto twice = [&](GeneratorId a, GeneratorId b) {
        const FieldSampler inner = generator_sampler(b, params, u.value, h);
        return apply_generator_fd(a, params, inner, p, h);
    };
    cplx Q{};
    for (GeneratorId g : {GeneratorId::N12, GeneratorId::N23, GeneratorId::N31}) Q += twice(g, g);
    for (GeneratorId g : {GeneratorId::N01, GeneratorId::N02, GeneratorId::N03}) Q -= twice(g, g);
    const cplx R = -(twice(GeneratorId::N01, GeneratorId::N23) + twice(GeneratorId::N02, GeneratorId::N31) +
                     twice(GeneratorId::N03, GeneratorId::N12));
    return {Q / u0, R / umax};
}

std::array<std::array<double, 3>, 3> rotation_matrix(double xi, double eps, double tau) {
    auto Rz = [](double a) {
        std::array<std::array<double, 3>, 3> r{};
        r[0] = {std::cos(a), -std::sin(a), 0.0};
        r[1] = {std::sin(a), std::cos(a), 0.0};
        r[2] = {0.0, 0.0, 1.0};
        return r;
    };
    auto Ry = [](double a) {
        std::array<std::array<double, 3>, 3> r{};
        r[0] = {std::cos(a), 0.0, std::sin(a)};
        r[1] = {0.0, 1.0, 0.0};
        r[2] = {-std::sin(a), 0.0, std::cos(a)};
        return r;
    };
    auto mul = [](const auto& A, const auto& B) {
        std::array<std::array<double, 3>, 3> C{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) C[i][j] += A[i][k] * B[k][j];
        return C;
    };
    return mul(mul(Rz(xi), Ry(eps)), Rz(tau));
}

std::array<double, 3> euler_angles(const std::array<std::array<double, 3>, 3>& R) {
    const double eps = std::acos(std::clamp(R[2][2], -1.0, 1.0));
    if (std::abs(std::sin(eps)) < 1e-12) {
        // gimbal lock: only xi + tau (or xi - tau) is determined
        const double a = std::atan2(R[1][0], R[0][0]);
        return {a, eps, 0.0};
    }
    const double xi = std::atan2(R[1][2], R[0][2]);
    const double tau = std::atan2(R[2][1], -R[2][0]);
    return {xi, eps, tau};
}

StateCoefficients rotate_state(const DeSitterParams& params, const StateCoefficients& state, double xi, double eps,
                               double tau) {
    (void)params;
    StateCoefficients out(state.l_max());
    for (int l = 0; l <= state.l_max(); ++l) {
        const Eigen::MatrixXcd D = wigner_D(l, xi, eps, tau);
        Eigen::VectorXcd c(2 * l + 1);
        for (int m = -l; m <= l; ++m) c(m + l) = state.at(l, m);
        const Eigen::VectorXcd r = D * c;
        for (int m = -l; m <= l; ++m) out.at(l, m) = r(m + l);
    }
    if (state.is_normalized()) out.mark_normalized();
    return out;
}

}  // namespace dsnw
