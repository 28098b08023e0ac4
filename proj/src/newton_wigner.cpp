#include "dsnw/newton_wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dsnw/errors.hpp"
#include "dsnw/geometry.hpp"
#include "dsnw/specfun.hpp"

namespace dsnw {

namespace {

constexpr double kPi = std::numbers::pi;
// |T| sqrt|gamma_l| below this counts as a zero of T
constexpr double kZeroGuard = 1e-12;

void check_nonzero(const DeSitterParams& params, int l, double t, cplx T) {
    const double scale = std::sqrt(std::abs(gamma_l(params, l)));
    if (!(std::abs(T) * scale > kZeroGuard)) {
        std::ostringstream os;
        os << "T vanishes at l = " << l << ", t = " << t << " (M = " << params.M << ")";
        throw ZeroCrossingError(os.str());
    }
}

double zeta_at_zero(const DeSitterParams& params, int l) {
    const cplx v = phase_N(params.nu) * ferrers_T_zero(OrderDegree{params.nu, l});
    return v.real() > 0.0 ? 0.0 : kPi;
}

// Real-axis components of the unit vector r^ = sum_mu c_mu Y_1^mu, mu = -1, 0, 1.
std::array<cplx, 3> unit_vector_components(int axis) {
    const double a = std::sqrt(2.0 * kPi / 3.0);
    switch (axis) {
        case 1: return {cplx(a), cplx(), cplx(-a)};
        case 2: return {cplx(0.0, a), cplx(), cplx(0.0, a)};
        case 3: return {cplx(), cplx(std::sqrt(4.0 * kPi / 3.0)), cplx()};
    }
    throw std::invalid_argument("axis must be 1, 2 or 3");
}

// int conj(Y_p^s) Y_1^mu Y_l^m dOmega
double gaunt(int p, int s, int mu, int l, int m) {
    if (mu + m != s) return 0.0;
    const double pre = std::sqrt(3.0 * (2 * l + 1) * (2 * p + 1) / (4.0 * kPi));
    const double sign = (s % 2) ? -1.0 : 1.0;
    return sign * pre * wigner_3j(1, l, p, 0, 0, 0) * wigner_3j(1, l, p, mu, m, -s);
}

// Multiplication by the unit-vector component on NW coefficients; image grows by one shell.
StateCoefficients multiply_unit_vector(const StateCoefficients& q, int axis) {
    const auto c = unit_vector_components(axis);
    const int L = q.l_max();
    StateCoefficients out(L + 1);
    for (int l = 0; l <= L; ++l) {
        for (int m = -l; m <= l; ++m) {
            const cplx v = q.get(l, m);
            if (v == cplx{}) continue;
            for (int p : {l - 1, l + 1}) {
                if (p < 0) continue;
                for (int mu = -1; mu <= 1; ++mu) {
                    if (c[mu + 1] == cplx{}) continue;
                    const int s = m + mu;
                    if (std::abs(s) > p) continue;
                    out.at(p, s) += c[mu + 1] * gaunt(p, s, mu, l, m) * v;
                }
            }
        }
    }
    return out;
}

std::array<double, 3> unit_vector(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

cplx nw_phase_factor(const DeSitterParams& params, int l, double t) {
    const cplx T = ferrers_T(OrderDegree{params.nu, l}, FerrersArg::from_time(t, params.alpha));
    check_nonzero(params, l, t, T);
    if (t == 0.0) return zeta_at_zero(params, l) == 0.0 ? 1.0 : -1.0;
    const cplx v = phase_N(params.nu) * T;
    return v / std::abs(v);
}

std::vector<double> zeta_phases(const DeSitterParams& params, int l, const std::vector<double>& ts) {
    const OrderDegree od{params.nu, l};
    od.validate();
    const cplx N = phase_N(params.nu);
    const double z0 = zeta_at_zero(params, l);

    double tau_pos = 0.0, tau_neg = 0.0;
    for (double t : ts) {
        tau_pos = std::max(tau_pos, t / params.alpha);
        tau_neg = std::min(tau_neg, t / params.alpha);
    }
    const double rate = od.sigma() + std::abs(params.nu) + 1.0;
    const double span = std::max(tau_pos, -tau_neg);
    const int n0 = static_cast<int>(std::ceil(span * rate / 0.25)) + 1;

    for (int attempt = 0; attempt < 8; ++attempt) {
        const int n = n0 << attempt;
        std::vector<double> taus;
        for (int k = 1; k <= n; ++k) {
            if (tau_pos > 0.0) taus.push_back(tau_pos * k / n);
            if (tau_neg < 0.0) taus.push_back(tau_neg * k / n);
        }
        const std::size_t n_path = taus.size();
        for (double t : ts) taus.push_back(t / params.alpha);
        const auto vals = ferrers_path(od, taus);

        // unwrap each side in order of |tau|
        std::vector<std::size_t> order(taus.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return std::abs(taus[a]) < std::abs(taus[b]); });
        std::vector<double> zeta(taus.size(), z0);
        bool ok = true;
        for (int side : {1, -1}) {
            double prev = z0;
            for (std::size_t i : order) {
                if (taus[i] == 0.0 || (taus[i] > 0.0) != (side > 0)) continue;
                const cplx T = vals[i].value;
                check_nonzero(params, l, taus[i] * params.alpha, T);
                const double target = -std::arg(N * T);
                const double d = std::remainder(target - prev, 2.0 * kPi);
                if (std::abs(d) >= kPi / 2.0) {
                    ok = false;
                    break;
                }
                prev += d;
                zeta[i] = prev;
            }
            if (!ok) break;
        }
        if (ok) return std::vector<double>(zeta.begin() + static_cast<std::ptrdiff_t>(n_path), zeta.end());
    }
    throw ConvergenceError("phase unwrapping did not resolve the path");
}

double zeta_phase(const DeSitterParams& params, int l, double t) { return zeta_phases(params, l, {t}).front(); }

double omega_dS(const DeSitterParams& params, int l, double t) {
    const cplx T = ferrers_T(OrderDegree{params.nu, l}, FerrersArg::from_time(t, params.alpha));
    check_nonzero(params, l, t, T);
    return 1.0 / (gamma_l(params, l) * std::norm(T));
}

double xi_factor(const DeSitterParams& params, int l, double t) {
    return scale_factor(params, t) * omega_dS(params, l, t);
}

PhaseTable PhaseTable::build(const DeSitterParams& params, int l_max, const std::vector<double>& ts) {
    PhaseTable tab;
    tab.l_max = l_max;
    tab.t = ts;
    tab.zeta.resize(l_max + 1);
    tab.xi.resize(l_max + 1);
    tab.omega.resize(l_max + 1);
    for (int l = 0; l <= l_max; ++l) {
        tab.zeta[l] = zeta_phases(params, l, ts);
        for (double t : ts) {
            const double w = omega_dS(params, l, t);
            tab.omega[l].push_back(w);
            tab.xi[l].push_back(scale_factor(params, t) * w);
        }
    }
    return tab;
}

ZetaDerivative zeta_derivative_check(const DeSitterParams& params, int l, double t, double h) {
    const double s = h * params.alpha;
    const auto z = zeta_phases(params, l, {t - 2 * s, t - s, t + s, t + 2 * s});
    const double fd = (z[0] - 8.0 * z[1] + 8.0 * z[2] - z[3]) / (12.0 * s);
    return {fd, omega_dS(params, l, t) / scale_factor(params, t)};
}

StateCoefficients apply_nw_phases(const DeSitterParams& params, const StateCoefficients& c, double t, bool inverse) {
    StateCoefficients out(c.l_max());
    for (int l = 0; l <= c.l_max(); ++l) {
        cplx e = nw_phase_factor(params, l, t);
        if (inverse) e = std::conj(e);
        for (int m = -l; m <= l; ++m) out.at(l, m) = c.at(l, m) * e;
    }
    return out;
}

NWState nw_transform(const DeSitterParams& params, const StateCoefficients& state, double t) {
    if (std::abs(state.norm() - 1.0) > 1e-10) throw std::invalid_argument("nw_transform expects a normalized state");
    NWState nw{t, apply_nw_phases(params, state, t, false)};
    nw.q.mark_normalized(1e-10);
    return nw;
}

NWState nw_transform_by_absorption(const DeSitterParams& params, const StateCoefficients& state, double t) {
    if (std::abs(state.norm() - 1.0) > 1e-10) throw std::invalid_argument("nw_transform expects a normalized state");
    const double tau = t / params.alpha;
    const cplx N = phase_N(params.nu);
    StateCoefficients q(state.l_max());
    for (int l = 0; l <= state.l_max(); ++l) {
        const cplx T = ferrers_T(OrderDegree{params.nu, l}, FerrersArg{tau});
        const double absorbed = std::sqrt(xi_factor(params, l, t) * gamma_l(params, l) / params.alpha);
        const cplx f = absorbed * N * T / std::sqrt(std::cosh(tau));
        for (int m = -l; m <= l; ++m) q.at(l, m) = state.at(l, m) * f;
    }
    q.mark_normalized(1e-10);
    return {t, q};
}

StateCoefficients nw_inverse(const DeSitterParams& params, const NWState& nw) {
    StateCoefficients s = apply_nw_phases(params, nw.q, nw.t, true);
    s.mark_normalized(1e-10);
    return s;
}

std::vector<cplx> nw_function(const NWState& nw, const SphereGrid& grid) {
    const int L = nw.l_max();
    std::vector<cplx> f(grid.size());
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const auto Y = spherical_harmonics_upto(L, grid.theta[i], grid.phi[j]);
            cplx s{};
            for (std::size_t k = 0; k < Y.size(); ++k) s += nw.q.data()[k] * Y[k];
            f[static_cast<std::size_t>(i) * grid.n_phi + j] = s;
        }
    }
    return f;
}

NWDensity nw_density(const DeSitterParams& params, const NWState& nw, const SphereGrid& grid) {
    const double a = scale_factor(params, nw.t);
    const auto f = nw_function(nw, grid);
    NWDensity d;
    d.raw.resize(f.size());
    d.density.resize(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        d.raw[k] = std::norm(f[k]);
        d.density[k] = d.raw[k] / (a * a);
    }
    double total = 0.0;
    for (int i = 0; i < grid.n_theta; ++i) {
        double row = 0.0;
        for (int j = 0; j < grid.n_phi; ++j) row += d.density[static_cast<std::size_t>(i) * grid.n_phi + j];
        total += grid.w_theta[i] * row;
    }
    d.total = total * grid.w_phi * a * a;
    return d;
}

StateCoefficients position_apply(const DeSitterParams& params, const StateCoefficients& state, double t, int axis) {
    const StateCoefficients q = apply_nw_phases(params, state, t, false);
    return apply_nw_phases(params, multiply_unit_vector(q, axis), t, true);
}

StateCoefficients position_apply_quadrature(const DeSitterParams& params, const StateCoefficients& state, double t,
                                            int axis, const SphereGrid& grid) {
    (void)unit_vector_components(axis);
    const int L = state.l_max() + 1;
    if (grid.bandwidth() < L) throw std::invalid_argument("grid bandwidth must be at least l_max + 1");
    const NWState nw{t, apply_nw_phases(params, state, t, false)};
    const auto f = nw_function(nw, grid);
    StateCoefficients image(L);
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * grid.n_phi + j;
            const double r = unit_vector(grid.theta[i], grid.phi[j])[axis - 1];
            const cplx g = r * f[k] * grid.weight(i, j);
            const auto Y = spherical_harmonics_upto(L, grid.theta[i], grid.phi[j]);
            for (int l = 0; l <= L; ++l)
                for (int m = -l; m <= l; ++m) image.at(l, m) += std::conj(Y[lm_index(l, m)]) * g;
        }
    }
    return apply_nw_phases(params, image, t, true);
}

Eigen::MatrixXcd position_matrix(const DeSitterParams& params, int l_max, double t, int axis) {
    const int n = (l_max + 1) * (l_max + 1);
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n, n);
    for (int l = 0; l <= l_max; ++l) {
        for (int m = -l; m <= l; ++m) {
            const auto col = position_apply(params, StateCoefficients::single(l_max, l, m), t, axis);
            for (int p = 0; p <= l_max; ++p)
                for (int s = -p; s <= p; ++s) X(lm_index(p, s), lm_index(l, m)) = col.at(p, s);
        }
    }
    return X;
}

PositionExpectation position_expectation(const DeSitterParams& params, const StateCoefficients& state, double t) {
    const double n2 = state.norm() * state.norm();
    if (!(n2 > 0.0)) throw std::invalid_argument("position expectation of the zero state");
    PositionExpectation out;
    for (int axis = 1; axis <= 3; ++axis) {
        const auto img = position_apply(params, state, t, axis);
        cplx s{};
        for (int l = 0; l <= state.l_max(); ++l)
            for (int m = -l; m <= l; ++m) s += std::conj(state.at(l, m)) * img.at(l, m);
        out.via_operator[axis - 1] = s.real() / n2;
    }
    const int L = state.l_max();
    const SphereGrid grid = SphereGrid::make(L + 2, 2 * L + 4);
    const NWState nw{t, apply_nw_phases(params, state, t, false)};
    const auto f = nw_function(nw, grid);
    std::array<double, 3> acc{};
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const double w = grid.weight(i, j) * std::norm(f[static_cast<std::size_t>(i) * grid.n_phi + j]);
            const auto r = unit_vector(grid.theta[i], grid.phi[j]);
            for (int c = 0; c < 3; ++c) acc[c] += w * r[c];
        }
    }
    for (int c = 0; c < 3; ++c) out.via_density[c] = acc[c] / n2;
    return out;
}

EvolveTrace evolve_trace(const DeSitterParams& params, const StateCoefficients& state,
                         const std::vector<double>& t_grid, const SphereGrid& grid) {
    if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw std::invalid_argument("t_grid must be sorted");
    EvolveTrace tr;
    for (double t : t_grid) {
        const NWState nw = nw_transform(params, state, t);
        NWDensity d = nw_density(params, nw, grid);
        tr.t.push_back(t);
        tr.norm.push_back(nw.norm());
        tr.expectation.push_back(position_expectation(params, state, t).via_operator);
        if (!tr.raw.empty()) {
            for (std::size_t k = 0; k < d.raw.size(); ++k) {
                tr.max_raw_change = std::max(tr.max_raw_change, std::abs(d.raw[k] - tr.raw.back()[k]));
                tr.max_density_change =
                    std::max(tr.max_density_change, std::abs(d.density[k] - tr.density.back()[k]));
            }
        }
        tr.raw.push_back(std::move(d.raw));
        tr.density.push_back(std::move(d.density));
    }
    return tr;
}

cplx delta_sequence(int L, double theta0, double phi0, double theta, double phi) {
    if (L < 0) throw IndexError("L must be nonnegative");
    const auto Y0 = spherical_harmonics_upto(L, theta0, phi0);
    const auto Y = spherical_harmonics_upto(L, theta, phi);
    cplx s{};
    for (std::size_t k = 0; k < Y.size(); ++k) s += std::conj(Y0[k]) * Y[k];
    return s;
}

StateCoefficients wavepacket(const DeSitterParams& params, int l_max, double theta0, double phi0, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("packet width must be positive");
    const auto Y0 = spherical_harmonics_upto(l_max, theta0, phi0);
    StateCoefficients q(l_max);
    for (int l = 0; l <= l_max; ++l) {
        const double damp = std::exp(-l * (l + 1.0) / (2.0 * width * width));
        for (int m = -l; m <= l; ++m) q.at(l, m) = std::conj(Y0[lm_index(l, m)]) * damp;
    }
    return apply_nw_phases(params, q.normalized(), 0.0, true).normalized();
}

bool SignAmbiguityReport::all_ok() const {
    if (choices[0].coeff_deviation > 1e-12 || choices[1].coeff_deviation > 1e-12) return false;
    if (!choices[0].coherent || choices[1].coherent) return false;
    for (const auto& s : signs)
        if (!s.ok) return false;
    for (const auto& p : peaks)
        if (!p.strictly_larger || (p.exhaustive_checked && !p.exhaustive_winner)) return false;
    return true;
}

SignAmbiguityReport sign_ambiguity_report(const DeSitterParams& params, int l_sign_max, int L_max,
                                          int exhaustive_max) {
    SignAmbiguityReport rep;
    rep.M = params.M;
    const cplx N = phase_N(params.nu);
    const int lmax_needed = std::max({l_sign_max, L_max, 1});
    std::vector<double> nt0(lmax_needed + 1), r0(lmax_needed + 1);
    for (int l = 0; l <= lmax_needed; ++l) {
        const cplx v = N * ferrers_T_zero(OrderDegree{params.nu, l});
        nt0[l] = v.real();
        r0[l] = mode_radial(params, l, 0.0).R.real();
    }

    // (a) the l in {0, 1} example
    const double inv3 = 1.0 / std::sqrt(3.0);
    const double y0 = 0.5 / std::sqrt(kPi);
    const double y1 = std::sqrt(3.0 / (4.0 * kPi));
    const int n_prof = 181;
    for (int c = 0; c < 2; ++c) {
        SignChoice& ch = rep.choices[c];
        ch.s0 = 1;
        ch.s1 = c == 0 ? -1 : 1;
        ch.label = c == 0 ? "s0 != s1" : "s0 == s1";
        ch.mode_coeffs = {cplx(ch.s0), cplx(ch.s1 * inv3)};
        ch.nw_coeffs = {double(ch.s0) * ch.mode_coeffs[0], double(ch.s1) * ch.mode_coeffs[1]};
        ch.nw_target = {1.0, inv3};
        const double g0 = nt0[0] > 0 ? 1.0 : -1.0, g1 = nt0[1] > 0 ? 1.0 : -1.0;
        ch.field_coeffs = {g0 * ch.mode_coeffs[0].real(), g1 * ch.mode_coeffs[1].real()};
        // sign of the l = 0 term is a global phase
        if (ch.field_coeffs[0] < 0) ch.field_coeffs = {-ch.field_coeffs[0], -ch.field_coeffs[1]};
        ch.field_target = {1.0, ch.s0 != ch.s1 ? inv3 : -inv3};
        ch.coeff_deviation = std::max({std::abs(ch.nw_coeffs[0] - ch.nw_target[0]),
                                       std::abs(ch.nw_coeffs[1] - ch.nw_target[1]),
                                       std::abs(ch.field_coeffs[0] - ch.field_target[0]),
                                       std::abs(ch.field_coeffs[1] - ch.field_target[1])});
        double best_nw = -1e300, best_field = -1e300;
        for (int k = 0; k < n_prof; ++k) {
            const double th = kPi * k / (n_prof - 1);
            const double nwv = (ch.nw_coeffs[0] * y0 + ch.nw_coeffs[1] * y1 * std::cos(th)).real();
            const double fv = r0[0] * ch.mode_coeffs[0].real() * y0 + r0[1] * ch.mode_coeffs[1].real() * y1 * std::cos(th);
            ch.theta.push_back(th);
            ch.nw_profile.push_back(nwv);
            ch.field_profile.push_back(fv);
            if (std::abs(nwv) > best_nw) {
                best_nw = std::abs(nwv);
                ch.nw_argmax = th;
            }
            if (std::abs(fv) > best_field) {
                best_field = std::abs(fv);
                ch.field_argmax = th;
            }
        }
        ch.coherent = std::abs(ch.nw_argmax - ch.field_argmax) < 1e-12;
    }

    // (b) sign of N T(0)
    for (int l = 0; l <= l_sign_max; ++l) {
        const cplx v = N * ferrers_T_zero(OrderDegree{params.nu, l});
        const int sg = v.real() > 0 ? 1 : -1;
        const int expect = (l % 2) ? -1 : 1;
        rep.signs.push_back({l, v.real(), v.imag(), sg, sg == expect && std::abs(v.imag()) <= 1e-12 * std::abs(v.real())});
    }

    // (c) peak of the delta sequence at the north pole
    auto peak = [&](const std::vector<int>& s, int L) {
        double acc = 0.0;
        for (int l = 0; l <= L; ++l) acc += s[l] * r0[l] * (2.0 * l + 1.0) / (4.0 * kPi);
        return std::abs(acc);
    };
    for (int L = 0; L <= L_max; ++L) {
        std::vector<int> s(L + 1);
        for (int l = 0; l <= L; ++l) s[l] = (l % 2) ? -1 : 1;
        PeakCheck pc{L, peak(s, L), 0.0, -1, true};
        for (int l = 1; l <= L; ++l) {
            s[l] = -s[l];
            const double v = peak(s, L);
            s[l] = -s[l];
            if (pc.best_flip_l < 0 || v > pc.best_flip) {
                pc.best_flip = v;
                pc.best_flip_l = l;
            }
        }
        pc.strictly_larger = pc.best_flip_l < 0 || pc.baseline > pc.best_flip;
        if (L <= exhaustive_max) {
            pc.exhaustive_checked = true;
            pc.exhaustive_winner = true;
            const unsigned long patterns = 1ul << L;
            std::vector<int> t(L + 1, 1);
            for (unsigned long bits = 0; bits < patterns; ++bits) {
                for (int l = 1; l <= L; ++l) t[l] = (bits >> (l - 1)) & 1ul ? -1 : 1;
                if (t != s && peak(t, L) >= pc.baseline) pc.exhaustive_winner = false;
            }
        }
        rep.peaks.push_back(pc);
    }
    return rep;
}

AsymptoticPair large_mass_asymptotics_check(const DeSitterParams& params, int l, double t) {
    const double ch = std::cosh(t / params.alpha);
    const double sign = (l % 2) ? -1.0 : 1.0;
    AsymptoticPair p;
    p.exact = mode_radial(params, l, t).R;
    p.asymptote = sign / std::sqrt(2.0 * params.alpha * params.M * ch * ch) *
                  std::exp(cplx(0.0, -params.M * t / params.alpha));
    return p;
}

}  // namespace dsnw
