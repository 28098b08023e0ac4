#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dsnw/modes.hpp"
#include "dsnw/params.hpp"

namespace dsnw {

// NW coefficients q_{l,m} = phi_{l,m} exp(-i zeta_l(t)) on the slice t.
struct NWState {
    double t = 0.0;
    StateCoefficients q;

    int l_max() const { return q.l_max(); }
    double norm() const { return q.norm(); }
};

// exp(-i zeta_l(t)) = N T / |N T|; exactly +-1 at t = 0. Throws ZeroCrossingError if T vanishes.
cplx nw_phase_factor(const DeSitterParams& params, int l, double t);

// zeta_l continuously unwrapped from zeta_l(0) in {0, pi}; one path per call.
std::vector<double> zeta_phases(const DeSitterParams& params, int l, const std::vector<double>& ts);
double zeta_phase(const DeSitterParams& params, int l, double t);

// 1 / (gamma_l |T|^2); sign follows gamma_l. Throws ZeroCrossingError if T vanishes.
double omega_dS(const DeSitterParams& params, int l, double t);
// a(t) omega_dS.
double xi_factor(const DeSitterParams& params, int l, double t);

struct PhaseTable {
    int l_max = 0;
    std::vector<double> t;
    // [l][k] for time t[k]
    std::vector<std::vector<double>> zeta, xi, omega;

    static PhaseTable build(const DeSitterParams& params, int l_max, const std::vector<double>& ts);
};

struct ZetaDerivative {
    double fd;       // 5-point FD of the unwrapped phase
    double formula;  // omega_dS / a
};
ZetaDerivative zeta_derivative_check(const DeSitterParams& params, int l, double t, double h = 1e-3);

// Throws std::invalid_argument for a state that is not normalized.
NWState nw_transform(const DeSitterParams& params, const StateCoefficients& state, double t);
// Same map built from the absorbed factor: phi sqrt(Xi gamma / alpha) N T / sqrt(cosh).
NWState nw_transform_by_absorption(const DeSitterParams& params, const StateCoefficients& state, double t);
// Unnormalized variant for images of operators.
StateCoefficients apply_nw_phases(const DeSitterParams& params, const StateCoefficients& c, double t, bool inverse);
StateCoefficients nw_inverse(const DeSitterParams& params, const NWState& nw);

// Sum q_{l,m} Y_l^m on the grid, index i * n_phi + j.
std::vector<cplx> nw_function(const NWState& nw, const SphereGrid& grid);

struct NWDensity {
    std::vector<double> density;  // |phi_NW / a|^2
    std::vector<double> raw;      // |phi_NW|^2 on the unit sphere
    double total = 0.0;           // int density a^2 dOmega
};
NWDensity nw_density(const DeSitterParams& params, const NWState& nw, const SphereGrid& grid);

// X^axis phi, axis in {1,2,3}; image has l_max + 1.
StateCoefficients position_apply(const DeSitterParams& params, const StateCoefficients& state, double t, int axis);
// Same image by multiplying phi_NW with the unit vector on the grid and re-projecting.
StateCoefficients position_apply_quadrature(const DeSitterParams& params, const StateCoefficients& state, double t,
                                            int axis, const SphereGrid& grid);
// Matrix of X^axis on the modes l <= l_max (index l*l + l + m).
Eigen::MatrixXcd position_matrix(const DeSitterParams& params, int l_max, double t, int axis);

struct PositionExpectation {
    std::array<double, 3> via_operator{};
    std::array<double, 3> via_density{};
};
PositionExpectation position_expectation(const DeSitterParams& params, const StateCoefficients& state, double t);

struct EvolveTrace {
    std::vector<double> t;
    std::vector<std::vector<double>> density;  // physical, per slice
    std::vector<std::vector<double>> raw;      // L2(S^2) density, per slice
    std::vector<std::array<double, 3>> expectation;
    std::vector<double> norm;
    double max_raw_change = 0.0;       // max over consecutive slices and nodes
    double max_density_change = 0.0;
};
// Throws std::invalid_argument if t_grid is not sorted.
EvolveTrace evolve_trace(const DeSitterParams& params, const StateCoefficients& state,
                         const std::vector<double>& t_grid, const SphereGrid& grid);

cplx delta_sequence(int L, double theta0, double phi0, double theta, double phi);

// Packet centred at (theta0, phi0) in the NW picture at t = 0: q_{l,m} ~ conj(Y_l^m(theta0, phi0))
// exp(-l(l+1) / (2 w^2)). Returns the normalized mode coefficients.
StateCoefficients wavepacket(const DeSitterParams& params, int l_max, double theta0, double phi0, double width);

struct SignChoice {
    std::string label;
    int s0 = 1, s1 = 1;
    std::array<cplx, 2> mode_coeffs{};      // (phi_00, phi_10)
    std::array<cplx, 2> nw_coeffs{};        // s_l phi_l
    std::array<double, 2> nw_target{};      // (1, 1/sqrt 3)
    std::array<double, 2> field_coeffs{};   // sgn(N T_l(0)) phi_l, sign of l = 0 removed
    std::array<double, 2> field_target{};   // (1, +-1/sqrt 3)
    double coeff_deviation = 0.0;
    std::vector<double> theta;
    std::vector<double> nw_profile;         // phi_NW(0, theta)
    std::vector<double> field_profile;      // phi(0, theta), physical normalization
    double nw_argmax = 0.0, field_argmax = 0.0;
    bool coherent = false;                  // both profiles peak on the same pole
};

struct SignCheck {
    int l;
    double value;  // N T_l(0), real part
    double imag;   // residual imaginary part
    int sign;
    bool ok;
};

struct PeakCheck {
    int L;
    double baseline;        // |delta^L| for s_l = (-1)^l
    double best_flip;       // largest |delta^L| with one s_l (l >= 1) flipped
    int best_flip_l = -1;
    bool strictly_larger;
    bool exhaustive_checked = false;  // all 2^L patterns with s_0 = +1 compared
    bool exhaustive_winner = false;
};

struct SignAmbiguityReport {
    double M = 0.0;
    std::array<SignChoice, 2> choices;  // s0 != s1, s0 == s1
    std::vector<SignCheck> signs;       // l <= 20
    std::vector<PeakCheck> peaks;       // L <= 20
    bool all_ok() const;
};
SignAmbiguityReport sign_ambiguity_report(const DeSitterParams& params, int l_sign_max = 20, int L_max = 20,
                                          int exhaustive_max = 12);

struct AsymptoticPair {
    cplx exact;
    cplx asymptote;
    double rel_diff() const { return std::abs(exact - asymptote) / std::abs(asymptote); }
};
AsymptoticPair large_mass_asymptotics_check(const DeSitterParams& params, int l, double t);

}  // namespace dsnw
