#include "dsnw/geometry.hpp"

#include <cmath>
#include <numbers>

#include "dsnw/errors.hpp"

namespace dsnw {

Vec4 embed(const DeSitterParams& params, const SpacetimePoint& p) {
    const double a = params.alpha;
    const double tau = p.t / a;
    const double r = a * std::cosh(tau);
    const double st = std::sin(p.theta);
    return {a * std::sinh(tau), r * st * std::cos(p.phi), r * st * std::sin(p.phi), r * std::cos(p.theta)};
}

double minkowski_dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

double scale_factor(const DeSitterParams& params, double t) { return params.alpha * std::cosh(t / params.alpha); }

std::array<Vec4, 3> embedding_jacobian(const DeSitterParams& params, const SpacetimePoint& p) {
    const double a = params.alpha;
    const double tau = p.t / a;
    const double ch = std::cosh(tau), sh = std::sinh(tau);
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    const double sp = std::sin(p.phi), cp = std::cos(p.phi);
    Vec4 dt{ch, sh * st * cp, sh * st * sp, sh * ct};
    Vec4 dth{0.0, a * ch * ct * cp, a * ch * ct * sp, -a * ch * st};
    Vec4 dph{0.0, -a * ch * st * sp, a * ch * st * cp, 0.0};
    return {dt, dth, dph};
}

Mat3 metric_fd(const DeSitterParams& params, const SpacetimePoint& p, const FdSteps& h) {
    std::array<Vec4, 3> J{};
    const double steps[3] = {h.h_t, h.h_theta, h.h_phi};
    for (int mu = 0; mu < 3; ++mu) {
        for (int a = 0; a < 4; ++a) {
            auto coord = [&](double x) {
                SpacetimePoint q = p;
                if (mu == 0) q.t = x;
                if (mu == 1) q.theta = x;
                if (mu == 2) q.phi = x;
                return embed(params, q)[a];
            };
            const double x0 = mu == 0 ? p.t : (mu == 1 ? p.theta : p.phi);
            J[mu][a] = fd5_first(coord, x0, steps[mu]);
        }
    }
    Mat3 g{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = minkowski_dot(J[i], J[j]);
    return g;
}

Mat3 metric_exact(const DeSitterParams& params, const SpacetimePoint& p) {
    const double a = scale_factor(params, p.t);
    const double s = std::sin(p.theta);
    Mat3 g{};
    g[0][0] = 1.0;
    g[1][1] = -a * a;
    g[2][2] = -a * a * s * s;
    return g;
}

std::array<double, 3> tangent_to_chart(const DeSitterParams& params, const SpacetimePoint& p, const Vec4& V,
                                       double min_sin) {
    const double s = std::sin(p.theta);
    if (std::abs(s) < min_sin) throw SingularChartError("chart Jacobian is singular at the poles");
    const auto J = embedding_jacobian(params, p);
    const double a = scale_factor(params, p.t);
    return {minkowski_dot(J[0], V), minkowski_dot(J[1], V) / (-a * a), minkowski_dot(J[2], V) / (-a * a * s * s)};
}

cplx kg_operator_fd(const DeSitterParams& params, const FieldSampler& f, const SpacetimePoint& p, const FdSteps& h,
                    bool with_mass) {
    if (p.theta < 4.0 * h.h_theta || p.theta > std::numbers::pi - 4.0 * h.h_theta) {
        throw SingularChartError("theta too close to a pole for the FD stencil");
    }
    auto along_t = [&](double x) { return f(SpacetimePoint{x, p.theta, p.phi}); };
    auto along_th = [&](double x) { return f(SpacetimePoint{p.t, x, p.phi}); };
    auto along_ph = [&](double x) { return f(SpacetimePoint{p.t, p.theta, x}); };

    const cplx f_t = fd5_first(along_t, p.t, h.h_t);
    const cplx f_tt = fd5_second(along_t, p.t, h.h_t);
    const cplx f_th = fd5_first(along_th, p.theta, h.h_theta);
    const cplx f_thth = fd5_second(along_th, p.theta, h.h_theta);
    const cplx f_phph = fd5_second(along_ph, p.phi, h.h_phi);

    const double a = scale_factor(params, p.t);
    const double s = std::sin(p.theta);
    const cplx lap = f_thth + (std::cos(p.theta) / s) * f_th + f_phph / (s * s);
    cplx out = f_tt + (2.0 / params.alpha) * std::tanh(p.t / params.alpha) * f_t - lap / (a * a);
    if (with_mass) out += params.mu() * params.mu() * f(p);
    return out;
}

}  // namespace dsnw
