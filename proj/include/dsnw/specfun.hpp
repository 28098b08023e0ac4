#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dsnw/params.hpp"

namespace dsnw {

// Relative accuracy target of complex_gamma on |z| <= 50.
inline constexpr double kGammaRelTol = 1e-13;
// Local tolerance of the Ferrers ODE continuation.
inline constexpr double kFerrersOdeTol = 1e-13;
// Hypergeometric series is accepted when sum|term| / |sum| stays below this.
inline constexpr double kSeriesMaxCondition = 1e4;

// log Gamma(z), any branch (only exp() of it is meaningful). Throws PoleError.
cplx log_gamma(cplx z);
cplx complex_gamma(cplx z);

// 1 for real nu, -i for Im nu > 0, +i for Im nu < 0.
cplx phase_N(cplx nu);

// Point z = i sinh(t) on the imaginary axis; t is measured in units of alpha.
struct FerrersArg {
    double t = 0.0;

    static FerrersArg from_time(double t, double alpha) { return FerrersArg{t / alpha}; }
    cplx z() const;
};

// Degree nu and half-integer order sigma = l + 1/2.
struct OrderDegree {
    cplx nu{};
    int l = 0;

    double sigma() const { return l + 0.5; }
    // Throws IndexError for l < 0.
    void validate() const;
};

enum class FerrersMethod { Series, Ode };

struct FerrersValue {
    cplx value;   // T(z)
    cplx dz;      // dT/dz
    cplx d2z;     // d^2T/dz^2
    FerrersMethod method = FerrersMethod::Series;
    double condition = 1.0;  // series condition number (1 for the ODE route)
};

// T(z) = Gamma(nu+sigma+1)/Gamma(nu-sigma+1) * P_nu^{-sigma}(z), the phase-adjusted
// Ferrers function of the first kind, with its first two z-derivatives.
FerrersValue ferrers_eval(const OrderDegree& od, const FerrersArg& arg);
cplx ferrers_T(const OrderDegree& od, const FerrersArg& arg);
cplx ferrers_dT(const OrderDegree& od, const FerrersArg& arg);

// Values along a set of times (units of alpha) from a single ODE sweep each way from t = 0.
std::vector<FerrersValue> ferrers_path(const OrderDegree& od, const std::vector<double>& ts);

// Closed form of T at z = 0.
cplx ferrers_T_zero(const OrderDegree& od);

// 2 sin((nu-sigma)pi) / (sin((nu+sigma)pi) Gamma(-nu-sigma) Gamma(nu-sigma+1)).
cplx wronskian_rhs(const OrderDegree& od);

// gamma_l = Gamma(-nu-l-1/2) Gamma(nu-l+1/2), real.
double gamma_l(const DeSitterParams& params, int l);

// Orthonormal Condon-Shortley harmonic.
cplx spherical_harmonic(int l, int m, double theta, double phi);
// All Y_l^m for l <= lmax at one point, index l*l + l + m.
std::vector<cplx> spherical_harmonics_upto(int lmax, double theta, double phi);
// Legendre polynomial P_l(x).
double legendre_p(int l, double x);

inline int lm_index(int l, int m) { return l * l + l + m; }

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3);

// Small-d matrix d^l_{m'm}(eps); rows/cols m = -l..l.
Eigen::MatrixXd wigner_small_d(int l, double eps);
// D^l_{m'm} = exp(-i m' xi) d^l_{m'm}(eps) exp(-i m tau), for R = Rz(xi) Ry(eps) Rz(tau).
Eigen::MatrixXcd wigner_D(int l, double xi, double eps, double tau);

}  // namespace dsnw
