#pragma once

#include <array>
#include <functional>

#include "dsnw/params.hpp"

namespace dsnw {

using FieldSampler = std::function<cplx(const SpacetimePoint&)>;
using Vec4 = std::array<double, 4>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Chart step sizes for 5-point central differences.
struct FdSteps {
    double h_t = 1e-3;
    double h_theta = 1e-3;
    double h_phi = 1e-3;

    static FdSteps defaults(const DeSitterParams& p) { return FdSteps{1e-3 * p.alpha, 1e-3, 1e-3}; }
    static FdSteps uniform(const DeSitterParams& p, double h) { return FdSteps{h * p.alpha, h, h}; }
};

// (X^0, X^1, X^2, X^3) on the hyperboloid X.X = -alpha^2.
Vec4 embed(const DeSitterParams& params, const SpacetimePoint& p);
// eta(X,X) with signature (+,-,-,-).
double minkowski_dot(const Vec4& a, const Vec4& b);

// a(t) = alpha cosh(t/alpha).
double scale_factor(const DeSitterParams& params, double t);

// Columns d/dt, d/dtheta, d/dphi of the embedding (analytic).
std::array<Vec4, 3> embedding_jacobian(const DeSitterParams& params, const SpacetimePoint& p);
// Metric g_{mu nu} from a 5-point FD Jacobian of embed.
Mat3 metric_fd(const DeSitterParams& params, const SpacetimePoint& p, const FdSteps& h);
// diag(1, -a^2, -a^2 sin^2 theta).
Mat3 metric_exact(const DeSitterParams& params, const SpacetimePoint& p);

// Chart components (v^t, v^theta, v^phi) of an ambient vector tangent to the hyperboloid.
// Throws SingularChartError when sin(theta) is below min_sin.
std::array<double, 3> tangent_to_chart(const DeSitterParams& params, const SpacetimePoint& p, const Vec4& V,
                                       double min_sin = 1e-6);

// (box + mu^2) f at p using 5-point stencils (O(h^4)); mass term dropped when with_mass is false.
// Throws SingularChartError when theta is within 4 h_theta of a pole.
cplx kg_operator_fd(const DeSitterParams& params, const FieldSampler& f, const SpacetimePoint& p,
                    const FdSteps& h, bool with_mass = true);

// 5-point stencils on a scalar function of one variable.
template <class F>
auto fd5_first(const F& f, double x, double h) {
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}
template <class F>
auto fd5_second(const F& f, double x, double h) {
    return (-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h * h);
}

}  // namespace dsnw
