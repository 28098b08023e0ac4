#pragma once

#include <array>
#include <string>
#include <vector>

#include "dsnw/geometry.hpp"
#include "dsnw/modes.hpp"

namespace dsnw {

enum class Discrete { P1, P2, P3, P, T };
enum class GeneratorId { N12, N23, N31, N01, N02, N03 };

std::string to_string(Discrete d);
std::string to_string(GeneratorId g);
// Throws std::invalid_argument for unknown names.
GeneratorId generator_from_string(const std::string& name);
bool is_boost(GeneratorId g);

// Coefficient map of the discrete symmetry (orthonormal Condon-Shortley convention).
StateCoefficients apply_discrete(Discrete sym, const DeSitterParams& params, const StateCoefficients& state);
// Image of a chart point under the spatial reflections (T maps t to -t).
SpacetimePoint reflect_point(Discrete sym, const SpacetimePoint& p);

// Ambient Killing vector of the generator at X.
Vec4 killing_vector(GeneratorId gen, const Vec4& X);
// Chart components (v^t, v^theta, v^phi) of the generator at p.
std::array<double, 3> generator_chart_components(GeneratorId gen, const DeSitterParams& params,
                                                 const SpacetimePoint& p);

inline constexpr double kGeneratorStep = 1e-4;
inline constexpr double kNestedGeneratorStep = 1e-3;

// Generator applied to f at p via 5-point stencils in chart coordinates (t step h*alpha).
// Throws SingularChartError within 4h of a pole.
cplx apply_generator_fd(GeneratorId gen, const DeSitterParams& params, const FieldSampler& f,
                        const SpacetimePoint& p, double h = kGeneratorStep);
FieldSampler generator_sampler(GeneratorId gen, const DeSitterParams& params, FieldSampler f,
                               double h = kGeneratorStep);

struct LadderEntry {
    int l, m;
    cplx value;
};

struct LadderReport {
    GeneratorId generator = GeneratorId::N12;
    double M = 0.0;
    int l = 0, m = 0;
    std::vector<LadderEntry> entries;  // l' in {l-1,l,l+1}, m' in {m-1,m,m+1}
    double max_outside = 0.0;          // largest |projection| outside those shells, l' <= l+2
    bool selection_rules_hold(double tol = 1e-6) const { return max_outside <= tol; }
    cplx entry(int lp, int mp) const;
};

// <u_{l',m'}, gen u_{l,m}> measured by KG projection on the grid.
LadderReport ladder_coefficients(GeneratorId gen, const DeSitterParams& params, int l, int m, double t,
                                 const SphereGrid& grid);

struct CasimirEstimate {
    cplx q;  // (Q u)/u at p, expected M^2
    cplx r;  // (R u)/max|u|, expected 0
};
// Throws DomainError if |u(p)| is too small relative to max|u| for a stable ratio.
CasimirEstimate casimir_check(const DeSitterParams& params, int l, int m, const SpacetimePoint& p,
                              double h = kNestedGeneratorStep);

// Rz(xi) Ry(eps) Rz(tau) acting on R^3.
std::array<std::array<double, 3>, 3> rotation_matrix(double xi, double eps, double tau);
// Euler angles (xi, eps, tau) of a rotation matrix.
std::array<double, 3> euler_angles(const std::array<std::array<double, 3>, 3>& R);
// Block-diagonal action of wigner_D on each l-shell: the field f(R^{-1} x).
StateCoefficients rotate_state(const DeSitterParams& params, const StateCoefficients& state, double xi, double eps,
                               double tau);

}  // namespace dsnw
