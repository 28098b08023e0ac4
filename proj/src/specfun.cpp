#include "dsnw/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "dsnw/errors.hpp"

namespace dsnw {

namespace {

using ldouble = long double;
using lcplx = std::complex<long double>;

constexpr ldouble kPiL = 3.141592653589793238462643383279502884L;
constexpr double kPi = std::numbers::pi;

// Lanczos-type series (g = 607/128, 14 terms); accurate to ~1e-15 for Re z >= 1/2.
lcplx lgamma_right(lcplx z) {
    static constexpr ldouble cof[14] = {
        57.1562356658629235L,     -59.5979603554754912L,    14.1360979747417471L,
        -0.491913816097620199L,   .339946499848118887e-4L,  .465236289270485756e-4L,
        -.983744753048795646e-4L, .158088703224912494e-3L,  -.210264441724104883e-3L,
        .217439618115212643e-3L,  -.164318106536763890e-3L, .844182239838527433e-4L,
        -.261908384015814087e-4L, .368991826595316234e-5L};
    constexpr ldouble sqrt2pi = 2.506628274631000502415765284811045253L;
    lcplx y = z;
    lcplx tmp = z + 5.24218750000000000L;
    tmp = (z + 0.5L) * std::log(tmp) - tmp;
    lcplx ser = 0.999999999999997092L;
    for (ldouble c : cof) {
        y += 1.0L;
        ser += c / y;
    }
    return tmp + std::log(sqrt2pi * ser / z);
}

// log(sin(pi z)) with exact reduction of the real part.
lcplx log_sin_pi(lcplx z) {
    const ldouble x = z.real();
    const ldouble y = z.imag();
    const ldouble n = std::nearbyint(x);
    const ldouble f = x - n;
    if (f == 0.0L && y == 0.0L) throw PoleError("sin(pi z) vanishes");
    lcplx base;
    if (std::fabs(y) < 20.0L) {
        base = std::log(std::sin(kPiL * lcplx(f, y)));
    } else {
        // sin(pi w) = exp(-i pi w) (exp(2 i pi w) - 1)/(2i) for Im w > 0, mirrored below.
        const lcplx w(f, y);
        const lcplx I(0.0L, 1.0L);
        if (y > 0) {
            base = -I * kPiL * w + std::log((std::exp(2.0L * I * kPiL * w) - 1.0L) / (2.0L * I));
        } else {
            base = I * kPiL * w + std::log((1.0L - std::exp(-2.0L * I * kPiL * w)) / (2.0L * I));
        }
    }
    return base + lcplx(0.0L, kPiL * n);
}

lcplx lgamma_ld(lcplx z) {
    if (z.imag() == 0.0L && z.real() <= 0.0L && z.real() == std::nearbyint(z.real())) {
        throw PoleError("Gamma pole at nonpositive integer " + std::to_string(static_cast<double>(z.real())));
    }
    if (z.real() >= 0.5L) return lgamma_right(z);
    return std::log(kPiL) - log_sin_pi(z) - lgamma_right(1.0L - z);
}

// ---------------------------------------------------------------- hypergeometric series

struct HypSeries {
    cplx F, dF, d2F;
    double condition = 1.0;
    bool converged = false;
};

// 2F1(a,b;c;w) with w-derivatives; |w| < 1 assumed.
HypSeries hyp2f1_series(cplx a, cplx b, double c, cplx w) {
    HypSeries out;
    cplx term = 1.0;
    cplx F = 1.0, dF = 0.0, d2F = 0.0;
    double absF = 1.0, absdF = 0.0, absd2F = 0.0;
    const double eps = 1e-17;
    int small_run = 0;
    for (int k = 0; k < 200000; ++k) {
        const double kk = k;
        const cplx r = (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * w;
        term *= r;
        const double n = kk + 1.0;
        F += term;
        dF += n * term;
        d2F += n * (n - 1.0) * term;
        const double at = std::abs(term);
        absF += at;
        absdF += n * at;
        absd2F += n * (n - 1.0) * at;
        const bool shrinking = std::abs(r) < 1.0;
        if (shrinking && at * n * n <= eps * std::max({std::abs(F), std::abs(dF), 1e-300})) {
            if (++small_run >= 3) {
                out.converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        if (term == 0.0) {
            out.converged = true;
            break;
        }
    }
    out.F = F;
    out.dF = dF / w;
    out.d2F = d2F / (w * w);
    out.condition = std::max(absF / std::abs(F), absdF / std::max(std::abs(dF), 1e-300));
    (void)absd2F;
    return out;
}

cplx gamma_ratio_product(const OrderDegree& od) {
    cplx p = 1.0;
    for (int j = -od.l; j <= od.l; ++j) p *= od.nu + 0.5 + static_cast<double>(j);
    return p;
}

constexpr double kSeriesMaxW = 0.9;

bool try_series(const OrderDegree& od, double t, FerrersValue& out, bool force = false) {
    const double s = std::sinh(t);
    const cplx z(0.0, s);
    const cplx w = (1.0 - z) / 2.0;
    if (std::abs(w) > kSeriesMaxW && !force) return false;
    const double sigma = od.sigma();
    const HypSeries hs = hyp2f1_series(od.nu + 1.0, -od.nu, sigma + 1.0, w);
    if (!hs.converged) return false;
    if (hs.condition > kSeriesMaxCondition && !force) return false;

    const cplx log_q = std::log(1.0 - z) - std::log(1.0 + z);
    const cplx P = gamma_ratio_product(od) * std::exp(0.5 * sigma * log_q) / std::tgamma(sigma + 1.0);
    const cplx one_m_z2 = 1.0 - z * z;
    const cplx g = -sigma / one_m_z2;
    const cplx gp = -sigma * 2.0 * z / (one_m_z2 * one_m_z2);
    out.value = P * hs.F;
    out.dz = P * (g * hs.F - 0.5 * hs.dF);
    out.d2z = P * ((g * g + gp) * hs.F - g * hs.dF + 0.25 * hs.d2F);
    out.method = FerrersMethod::Series;
    out.condition = hs.condition;
    return true;
}

using OdeState = std::array<cplx, 2>;

struct LegendreTau {
    cplx lambda;
    double sigma2;
    void operator()(const OdeState& x, OdeState& dxdt, double tau) const {
        const double c = std::cosh(tau);
        dxdt[0] = x[1];
        dxdt[1] = -std::tanh(tau) * x[1] + (lambda - sigma2 / (c * c)) * x[0];
    }
};

FerrersValue from_state(const OrderDegree& od, const OdeState& x, double tau, double scale) {
    FerrersValue v;
    const double c = std::cosh(tau);
    const cplx z(0.0, std::sinh(tau));
    v.value = x[0] * scale;
    v.dz = x[1] * scale / cplx(0.0, c);
    const cplx lambda = od.nu * (od.nu + 1.0);
    const double c2 = c * c;
    v.d2z = (2.0 * z * v.dz - (lambda - od.sigma() * od.sigma() / c2) * v.value) / c2;
    v.method = FerrersMethod::Ode;
    v.condition = 1.0;
    return v;
}

// Integrate from tau = 0 through increasing |tau| values (all same sign, sorted by |tau|).
void ode_sweep(const OrderDegree& od, const std::vector<double>& taus, std::vector<FerrersValue>& out) {
    namespace ode = boost::numeric::odeint;
    FerrersValue anchor;
    if (!try_series(od, 0.0, anchor, true) || anchor.condition > kSeriesMaxCondition) {
        throw ConvergenceError("Ferrers anchor series at z = 0 is ill-conditioned");
    }
    const double sigma = od.sigma();
    const double scale = std::abs(anchor.value) + std::abs(anchor.dz);
    OdeState x{anchor.value / scale, cplx(0.0, 1.0) * anchor.dz / scale};
    LegendreTau sys{od.nu * (od.nu + 1.0), sigma * sigma};

    std::vector<double> times;
    times.reserve(taus.size() + 1);
    times.push_back(0.0);
    times.insert(times.end(), taus.begin(), taus.end());

    const double rate = std::abs(od.nu) + sigma + 1.0;
    const double dir = (taus.empty() || taus.back() >= 0.0) ? 1.0 : -1.0;
    auto stepper = ode::make_controlled(1e-2 * kFerrersOdeTol, kFerrersOdeTol, ode::runge_kutta_fehlberg78<OdeState>());
    std::size_t k = 0;
    auto observer = [&](const OdeState& s, double tau) {
        if (k > 0) out[k - 1] = from_state(od, s, tau, scale);
        ++k;
    };
    out.assign(taus.size(), FerrersValue{});
    try {
        ode::integrate_times(stepper, sys, x, times.begin(), times.end(), dir * 0.05 / rate, observer,
                             ode::max_step_checker(2000000));
    } catch (const std::exception& e) {
        throw ConvergenceError(std::string("Ferrers ODE continuation failed: ") + e.what());
    }
}

}  // namespace

// ---------------------------------------------------------------- gamma

cplx log_gamma(cplx z) {
    const lcplx r = lgamma_ld(lcplx(z.real(), z.imag()));
    return cplx(static_cast<double>(r.real()), static_cast<double>(r.imag()));
}

cplx complex_gamma(cplx z) {
    const lcplx r = std::exp(lgamma_ld(lcplx(z.real(), z.imag())));
    return cplx(static_cast<double>(r.real()), static_cast<double>(r.imag()));
}

cplx phase_N(cplx nu) {
    if (nu.imag() == 0.0) return 1.0;
    return nu.imag() > 0.0 ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
}

// ---------------------------------------------------------------- Ferrers

cplx FerrersArg::z() const { return cplx(0.0, std::sinh(t)); }

void OrderDegree::validate() const {
    if (l < 0) throw IndexError("order index l must be nonnegative");
    if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag())) throw DomainError("degree nu must be finite");
}

FerrersValue ferrers_eval(const OrderDegree& od, const FerrersArg& arg) {
    od.validate();
    if (!std::isfinite(arg.t)) throw DomainError("Ferrers argument must be finite");
    FerrersValue v;
    if (try_series(od, arg.t, v)) return v;
    std::vector<FerrersValue> out;
    ode_sweep(od, {arg.t}, out);
    return out.front();
}

cplx ferrers_T(const OrderDegree& od, const FerrersArg& arg) { return ferrers_eval(od, arg).value; }

cplx ferrers_dT(const OrderDegree& od, const FerrersArg& arg) { return ferrers_eval(od, arg).dz; }

std::vector<FerrersValue> ferrers_path(const OrderDegree& od, const std::vector<double>& ts) {
    od.validate();
    std::vector<std::pair<double, std::size_t>> pos, neg;
    FerrersValue at_zero;
    bool need_zero = false;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] > 0.0) pos.emplace_back(ts[i], i);
        else if (ts[i] < 0.0) neg.emplace_back(ts[i], i);
        else need_zero = true;
    }
    std::vector<FerrersValue> result(ts.size());
    if (need_zero) {
        try_series(od, 0.0, at_zero, true);
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (ts[i] == 0.0) result[i] = at_zero;
    }
    auto sweep = [&](std::vector<std::pair<double, std::size_t>>& side) {
        if (side.empty()) return;
        std::sort(side.begin(), side.end(),
                  [](const auto& a, const auto& b) { return std::abs(a.first) < std::abs(b.first); });
        std::vector<double> taus;
        for (const auto& p : side) taus.push_back(p.first);
        // drop duplicates for odeint, then scatter back
        std::vector<double> uniq;
        for (double t : taus)
            if (uniq.empty() || t != uniq.back()) uniq.push_back(t);
        std::vector<FerrersValue> vals;
        ode_sweep(od, uniq, vals);
        std::size_t u = 0;
        for (const auto& p : side) {
            while (uniq[u] != p.first) ++u;
            result[p.second] = vals[u];
        }
    };
    sweep(pos);
    sweep(neg);
    return result;
}

cplx ferrers_T_zero(const OrderDegree& od) {
    od.validate();
    const double s = od.sigma();
    const cplx nu = od.nu;
    const cplx lg = log_gamma(nu + s + 1.0) - log_gamma(nu - s + 1.0) - log_gamma((s - nu + 1.0) / 2.0) -
                    log_gamma((nu + s) / 2.0 + 1.0);
    return std::sqrt(kPi) * std::pow(2.0, -s) * std::exp(lg);
}

cplx wronskian_rhs(const OrderDegree& od) {
    od.validate();
    const double s = od.sigma();
    const cplx nu = od.nu;
    const cplx den = std::sin((nu + s) * kPi);
    if (std::abs(den) < 1e-14) throw DegenerateParameterError("sin((nu+sigma)pi) vanishes");
    const cplx g = complex_gamma(-nu - s) * complex_gamma(nu - s + 1.0);
    return 2.0 * std::sin((nu - s) * kPi) / (den * g);
}

double gamma_l(const DeSitterParams& params, int l) {
    if (l < 0) throw IndexError("l must be nonnegative");
    if (std::abs(params.M - 1.0) <= 1e-12) throw ExcludedMassError("excluded case: M = 1 is not treated");
    const double s = l + 0.5;
    const lcplx nu(params.nu.real(), params.nu.imag());
    const lcplx v = std::exp(lgamma_ld(-nu - static_cast<ldouble>(s)) + lgamma_ld(nu - static_cast<ldouble>(s) + 1.0L));
    if (std::fabs(v.imag()) > 1e-12L * std::abs(v)) {
        throw ConvergenceError("gamma_l has a non-negligible imaginary part");
    }
    return static_cast<double>(v.real());
}

// ---------------------------------------------------------------- harmonics

std::vector<cplx> spherical_harmonics_upto(int lmax, double theta, double phi) {
    if (lmax < 0) throw IndexError("lmax must be nonnegative");
    const int n = (lmax + 1) * (lmax + 1);
    std::vector<cplx> Y(n);
    const double x = std::cos(theta);
    const double sx = std::sin(theta);
    // normalized associated Legendre with Condon-Shortley phase, column by column in m
    std::vector<double> P(n, 0.0);
    double pmm = std::sqrt(1.0 / (4.0 * kPi));
    for (int m = 0; m <= lmax; ++m) {
        if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx;
        P[lm_index(m, m)] = pmm;
        if (m + 1 <= lmax) P[lm_index(m + 1, m)] = x * std::sqrt(2.0 * m + 3.0) * pmm;
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
            const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - m * m) / (4.0 * (l - 1) * (l - 1) - 1.0));
            P[lm_index(l, m)] = a * (x * P[lm_index(l - 1, m)] - b * P[lm_index(l - 2, m)]);
        }
    }
    for (int l = 0; l <= lmax; ++l) {
        for (int m = 0; m <= l; ++m) {
            const cplx e = std::polar(1.0, m * phi);
            const cplx y = P[lm_index(l, m)] * e;
            Y[lm_index(l, m)] = y;
            if (m > 0) Y[lm_index(l, -m)] = ((m % 2) ? -1.0 : 1.0) * std::conj(y);
        }
    }
    return Y;
}

cplx spherical_harmonic(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw IndexError("spherical harmonic requires 0 <= |m| <= l");
    return spherical_harmonics_upto(l, theta, phi)[lm_index(l, m)];
}

double legendre_p(int l, double x) {
    if (l < 0) throw IndexError("l must be nonnegative");
    double p0 = 1.0, p1 = x;
    if (l == 0) return p0;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// ---------------------------------------------------------------- Wigner symbols

namespace {

const std::vector<double>& log_factorials() {
    static const std::vector<double> table = [] {
        std::vector<double> t(1024);
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
        return t;
    }();
    return table;
}

double lf(int n) {
    const auto& t = log_factorials();
    if (n < 0 || static_cast<std::size_t>(n) >= t.size()) throw IndexError("factorial argument out of table range");
    return t[n];
}

}  // namespace

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
    if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
    if (m1 + m2 + m3 != 0) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
    if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
    if (m1 == 0 && m2 == 0 && m3 == 0 && ((j1 + j2 + j3) % 2)) return 0.0;

    const double log_tri = lf(j1 + j2 - j3) + lf(j1 - j2 + j3) + lf(-j1 + j2 + j3) - lf(j1 + j2 + j3 + 1);
    const double log_pre =
        0.5 * (log_tri + lf(j1 + m1) + lf(j1 - m1) + lf(j2 + m2) + lf(j2 - m2) + lf(j3 + m3) + lf(j3 - m3));
    const int kmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
    const int kmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
    double sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double ld =
            lf(k) + lf(j1 + j2 - j3 - k) + lf(j1 - m1 - k) + lf(j2 + m2 - k) + lf(j3 - j2 + m1 + k) + lf(j3 - j1 - m2 + k);
        sum += ((k % 2) ? -1.0 : 1.0) * std::exp(log_pre - ld);
    }
    const int ph = j1 - j2 - m3;
    return ((ph % 2 != 0) ? -1.0 : 1.0) * sum;
}

Eigen::MatrixXd wigner_small_d(int l, double eps) {
    if (l < 0) throw IndexError("l must be nonnegative");
    const int n = 2 * l + 1;
    Eigen::MatrixXd d(n, n);
    const double c = std::cos(0.5 * eps);
    const double s = std::sin(0.5 * eps);
    for (int mp = -l; mp <= l; ++mp) {
        for (int m = -l; m <= l; ++m) {
            const double lpre = 0.5 * (lf(l + m) + lf(l - m) + lf(l + mp) + lf(l - mp));
            const int kmin = std::max(0, m - mp);
            const int kmax = std::min(l + m, l - mp);
            double sum = 0.0;
            for (int k = kmin; k <= kmax; ++k) {
                const int pc = 2 * l - 2 * k + m - mp;
                const int ps = 2 * k - m + mp;
                const double mag = std::exp(lpre - lf(l + m - k) - lf(k) - lf(l - k - mp) - lf(k - m + mp));
                const double sgn = ((k - m + mp) % 2 != 0) ? -1.0 : 1.0;
                sum += sgn * mag * std::pow(c, pc) * std::pow(s, ps);
            }
            d(mp + l, m + l) = sum;
        }
    }
    return d;
}

Eigen::MatrixXcd wigner_D(int l, double xi, double eps, double tau) {
    const Eigen::MatrixXd d = wigner_small_d(l, eps);
    const int n = 2 * l + 1;
    Eigen::MatrixXcd D(n, n);
    for (int mp = -l; mp <= l; ++mp)
        for (int m = -l; m <= l; ++m)
            D(mp + l, m + l) = std::polar(1.0, -mp * xi) * d(mp + l, m + l) * std::polar(1.0, -m * tau);
    return D;
}

}  // namespace dsnw
