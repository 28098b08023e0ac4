#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dsnw/geometry.hpp"
#include "dsnw/params.hpp"

namespace dsnw {

// Truncated coefficient table phi_{l,m}, 0 <= l <= l_max, |m| <= l, stored at l*l + l + m.
class StateCoefficients {
public:
    StateCoefficients() = default;
    explicit StateCoefficients(int l_max);

    static StateCoefficients single(int l_max, int l, int m, cplx value = 1.0);
    // Deterministic pseudo-random normalized state.
    static StateCoefficients random(int l_max, std::uint64_t seed);

    int l_max() const { return l_max_; }
    std::size_t size() const { return c_.size(); }
    cplx& at(int l, int m);
    const cplx& at(int l, int m) const;
    // Zero outside the stored range instead of throwing.
    cplx get(int l, int m) const;

    const std::vector<cplx>& data() const { return c_; }
    std::vector<cplx>& data() { normalized_ = false; return c_; }

    double norm() const;
    bool is_normalized() const { return normalized_; }
    // Copy scaled to unit norm; throws std::invalid_argument for the zero state.
    StateCoefficients normalized() const;
    // Marks a state as normalized if its norm is 1 to within tol.
    StateCoefficients& mark_normalized(double tol = 1e-12);
    StateCoefficients resized(int l_max) const;

    StateCoefficients& operator+=(const StateCoefficients& o);
    StateCoefficients& operator*=(cplx a);
    friend StateCoefficients operator+(StateCoefficients a, const StateCoefficients& b) { return a += b; }
    friend StateCoefficients operator*(cplx a, StateCoefficients s) { return s *= a; }

    double max_abs_diff(const StateCoefficients& o) const;

private:
    int l_max_ = 0;
    std::vector<cplx> c_{cplx{}};
    bool normalized_ = false;
};

// Gauss-Legendre in cos(theta) times trapezoid in phi.
struct SphereGrid {
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> theta, cos_theta, w_theta;
    std::vector<double> phi;
    double w_phi = 0.0;
    // step of the t-stencil used for samplers without an analytic time derivative
    double t_step = 1e-3;

    static SphereGrid make(int n_theta, int n_phi, double t_step = 1e-3);
    std::size_t size() const { return static_cast<std::size_t>(n_theta) * n_phi; }
    double weight(int i, int j) const { (void)j; return w_theta[i] * w_phi; }
    SpacetimePoint node(double t, int i, int j) const { return {t, theta[i], phi[j]}; }
    // Largest l such that all products of harmonics up to l integrate exactly.
    int bandwidth() const;
    double total_weight() const;
};

// Sampler with optional analytic time derivative and known harmonic bandwidth (-1 = unknown).
struct Field {
    FieldSampler value;
    FieldSampler dt;
    int bandwidth = -1;
};

enum class Energy { Positive, Negative };
enum class Sector { UU, VV, UV };

struct RadialValue {
    cplx R;   // C_l N(nu) T(+-i sinh(t/alpha)) / sqrt(cosh(t/alpha))
    cplx dR;  // d/dt
};

// sqrt(|gamma_l| / (2 alpha)).
double mode_constant(const DeSitterParams& params, int l);
RadialValue mode_radial(const DeSitterParams& params, int l, double t, Energy e = Energy::Positive);

cplx mode_u(const DeSitterParams& params, int l, int m, const SpacetimePoint& p);
cplx mode_v(const DeSitterParams& params, int l, int m, const SpacetimePoint& p);
// Analytic time derivatives.
cplx mode_u_dt(const DeSitterParams& params, int l, int m, const SpacetimePoint& p);
cplx mode_v_dt(const DeSitterParams& params, int l, int m, const SpacetimePoint& p);

// Field wrappers; radial values are memoized per time (thread-safe).
Field mode_field(const DeSitterParams& params, int l, int m, Energy e = Energy::Positive);
Field state_field(const DeSitterParams& params, const StateCoefficients& state);

cplx superpose(const DeSitterParams& params, const StateCoefficients& state, const SpacetimePoint& p);

// Field values and time derivatives on the grid nodes at one time, index i * n_phi + j.
struct SliceSamples {
    std::vector<cplx> value, dt;
};
SliceSamples sample_field(const Field& f, double t, const SphereGrid& grid);
SliceSamples sample_mode(const DeSitterParams& params, int l, int m, double t, const SphereGrid& grid,
                         Energy e = Energy::Positive);
SliceSamples sample_state(const DeSitterParams& params, const StateCoefficients& state, double t,
                          const SphereGrid& grid);

struct InnerProductResult {
    cplx value;
    bool under_resolved = false;  // bandwidth of f or g exceeds the grid's exactness
};

// i a(t)^2 \int (f* d_t g - d_t f* g) sin(theta) dtheta dphi.
cplx inner_product(const DeSitterParams& params, const SliceSamples& f, const SliceSamples& g, double t,
                   const SphereGrid& grid);
InnerProductResult inner_product(const DeSitterParams& params, const Field& f, const Field& g, double t,
                                 const SphereGrid& grid);

// \int f* g sin(theta) dtheta dphi.
cplx l2_product(const std::vector<cplx>& f, const std::vector<cplx>& g, const SphereGrid& grid);

// Gram matrix over modes ordered by l*l + l + m. Throws std::invalid_argument if the grid is too coarse.
Eigen::MatrixXcd orthonormality_matrix(const DeSitterParams& params, int l_max, double t, const SphereGrid& grid,
                                       Sector sector = Sector::UU);
double max_deviation(const Eigen::MatrixXcd& gram, cplx diagonal);

struct TwoPointResult {
    cplx value;
    cplx last_shell;
};
// sum_{l<=l_max} sum_m u_{l,m}(p1) conj(u_{l,m}(t2, 0, 0)).
TwoPointResult two_point_G(const DeSitterParams& params, const SpacetimePoint& p1, double t2, int l_max);

// (KG form of <f,g>, 2 mu a(t)^2 \int f* g) for two states.
std::pair<cplx, cplx> large_mass_product_check(const DeSitterParams& params, const StateCoefficients& f,
                                               const StateCoefficients& g, double t, const SphereGrid& grid);

}  // namespace dsnw
