#include "dsnw/modes.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dsnw/errors.hpp"
#include "dsnw/specfun.hpp"

namespace dsnw {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------- StateCoefficients

StateCoefficients::StateCoefficients(int l_max) : l_max_(l_max) {
    if (l_max < 0) throw IndexError("l_max must be nonnegative");
    c_.assign(static_cast<std::size_t>((l_max + 1) * (l_max + 1)), cplx{});
}

StateCoefficients StateCoefficients::single(int l_max, int l, int m, cplx value) {
    StateCoefficients s(l_max);
    s.at(l, m) = value;
    s.normalized_ = std::abs(std::abs(value) - 1.0) <= 1e-14;
    return s;
}

StateCoefficients StateCoefficients::random(int l_max, std::uint64_t seed) {
    StateCoefficients s(l_max);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& c : s.c_) c = cplx(u(rng), u(rng));
    return s.normalized();
}

cplx& StateCoefficients::at(int l, int m) {
    if (l < 0 || l > l_max_ || std::abs(m) > l) throw IndexError("coefficient index out of range");
    normalized_ = false;
    return c_[lm_index(l, m)];
}

const cplx& StateCoefficients::at(int l, int m) const {
    if (l < 0 || l > l_max_ || std::abs(m) > l) throw IndexError("coefficient index out of range");
    return c_[lm_index(l, m)];
}

cplx StateCoefficients::get(int l, int m) const {
    if (l < 0 || l > l_max_ || std::abs(m) > l) return cplx{};
    return c_[lm_index(l, m)];
}

double StateCoefficients::norm() const {
    double s = 0.0;
    for (const auto& c : c_) s += std::norm(c);
    return std::sqrt(s);
}

StateCoefficients StateCoefficients::normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw std::invalid_argument("cannot normalize the zero state");
    StateCoefficients s = *this;
    for (auto& c : s.c_) c /= n;
    s.normalized_ = true;
    return s;
}

StateCoefficients& StateCoefficients::mark_normalized(double tol) {
    normalized_ = std::abs(norm() - 1.0) <= tol;
    return *this;
}

StateCoefficients StateCoefficients::resized(int l_max) const {
    StateCoefficients s(l_max);
    for (int l = 0; l <= std::min(l_max, l_max_); ++l)
        for (int m = -l; m <= l; ++m) s.c_[lm_index(l, m)] = c_[lm_index(l, m)];
    if (l_max >= l_max_) s.normalized_ = normalized_;
    return s;
}

StateCoefficients& StateCoefficients::operator+=(const StateCoefficients& o) {
    if (o.l_max_ > l_max_) *this = resized(o.l_max_);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalized_ = false;
    return *this;
}

StateCoefficients& StateCoefficients::operator*=(cplx a) {
    for (auto& c : c_) c *= a;
    normalized_ = normalized_ && std::abs(std::abs(a) - 1.0) <= 1e-15;
    return *this;
}

double StateCoefficients::max_abs_diff(const StateCoefficients& o) const {
    const int L = std::max(l_max_, o.l_max_);
    double d = 0.0;
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) d = std::max(d, std::abs(get(l, m) - o.get(l, m)));
    return d;
}

// ---------------------------------------------------------------- SphereGrid

SphereGrid SphereGrid::make(int n_theta, int n_phi, double t_step) {
    if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("grid sizes must be positive");
    SphereGrid g;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    g.t_step = t_step;
    g.theta.resize(n_theta);
    g.cos_theta.resize(n_theta);
    g.w_theta.resize(n_theta);
    const int n = n_theta;
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            const double pn = n == 1 ? x : p1;
            const double pn1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double pn = n == 1 ? x : p1;
        const double pn1 = n == 1 ? 1.0 : p0;
        dp = n * (x * pn - pn1) / (x * x - 1.0);
        g.cos_theta[i] = x;
        g.theta[i] = std::acos(x);
        g.w_theta[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    g.phi.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) g.phi[j] = 2.0 * kPi * j / n_phi;
    g.w_phi = 2.0 * kPi / n_phi;
    return g;
}

int SphereGrid::bandwidth() const { return std::min(n_theta - 1, (n_phi - 1) / 2); }

double SphereGrid::total_weight() const {
    double s = 0.0;
    for (int i = 0; i < n_theta; ++i) s += w_theta[i];
    return s * w_phi * n_phi;
}

// ---------------------------------------------------------------- modes

double mode_constant(const DeSitterParams& params, int l) {
    return std::sqrt(std::abs(gamma_l(params, l)) / (2.0 * params.alpha));
}

RadialValue mode_radial(const DeSitterParams& params, int l, double t, Energy e) {
    const double tau = t / params.alpha;
    const double sgn = e == Energy::Positive ? 1.0 : -1.0;
    const FerrersValue fv = ferrers_eval(OrderDegree{params.nu, l}, FerrersArg{sgn * tau});
    const double ch = std::cosh(tau);
    const double sq = std::sqrt(ch);
    const cplx pre = mode_constant(params, l) * phase_N(params.nu);
    RadialValue r;
    r.R = pre * fv.value / sq;
    r.dR = pre / params.alpha * (cplx(0.0, sgn * ch) * fv.dz / sq - 0.5 * std::tanh(tau) * fv.value / sq);
    return r;
}

cplx mode_u(const DeSitterParams& params, int l, int m, const SpacetimePoint& p) {
    return mode_radial(params, l, p.t, Energy::Positive).R * spherical_harmonic(l, m, p.theta, p.phi);
}

cplx mode_v(const DeSitterParams& params, int l, int m, const SpacetimePoint& p) {
    return mode_radial(params, l, p.t, Energy::Negative).R * spherical_harmonic(l, m, p.theta, p.phi);
}

cplx mode_u_dt(const DeSitterParams& params, int l, int m, const SpacetimePoint& p) {
    return mode_radial(params, l, p.t, Energy::Positive).dR * spherical_harmonic(l, m, p.theta, p.phi);
}

cplx mode_v_dt(const DeSitterParams& params, int l, int m, const SpacetimePoint& p) {
    return mode_radial(params, l, p.t, Energy::Negative).dR * spherical_harmonic(l, m, p.theta, p.phi);
}

namespace {

// Per-time cache of radial values for all l <= l_max.
class RadialMemo {
public:
    RadialMemo(DeSitterParams p, int l_max, Energy e) : params_(p), l_max_(l_max), e_(e) {}

    std::vector<RadialValue> get(double t) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(t);
            if (it != cache_.end()) return it->second;
        }
        std::vector<RadialValue> v(l_max_ + 1);
        for (int l = 0; l <= l_max_; ++l) v[l] = mode_radial(params_, l, t, e_);
        std::lock_guard<std::mutex> lock(mu_);
        if (cache_.size() > 4096) cache_.clear();
        cache_.emplace(t, v);
        return v;
    }

private:
    DeSitterParams params_;
    int l_max_;
    Energy e_;
    std::mutex mu_;
    std::map<double, std::vector<RadialValue>> cache_;
};

}  // namespace

Field mode_field(const DeSitterParams& params, int l, int m, Energy e) {
    if (l < 0 || std::abs(m) > l) throw IndexError("mode index out of range");
    auto memo = std::make_shared<RadialMemo>(params, l, e);
    Field f;
    f.value = [memo, l, m](const SpacetimePoint& p) {
        return memo->get(p.t)[l].R * spherical_harmonic(l, m, p.theta, p.phi);
    };
    f.dt = [memo, l, m](const SpacetimePoint& p) {
        return memo->get(p.t)[l].dR * spherical_harmonic(l, m, p.theta, p.phi);
    };
    f.bandwidth = l;
    return f;
}

Field state_field(const DeSitterParams& params, const StateCoefficients& state) {
    auto memo = std::make_shared<RadialMemo>(params, state.l_max(), Energy::Positive);
    auto coeffs = std::make_shared<StateCoefficients>(state);
    auto eval = [memo, coeffs](const SpacetimePoint& p, bool deriv) {
        const auto rad = memo->get(p.t);
        const auto Y = spherical_harmonics_upto(coeffs->l_max(), p.theta, p.phi);
        cplx s{};
        for (int l = 0; l <= coeffs->l_max(); ++l) {
            const cplx r = deriv ? rad[l].dR : rad[l].R;
            cplx a{};
            for (int m = -l; m <= l; ++m) a += coeffs->get(l, m) * Y[lm_index(l, m)];
            s += r * a;
        }
        return s;
    };
    Field f;
    f.value = [eval](const SpacetimePoint& p) { return eval(p, false); };
    f.dt = [eval](const SpacetimePoint& p) { return eval(p, true); };
    f.bandwidth = state.l_max();
    return f;
}

cplx superpose(const DeSitterParams& params, const StateCoefficients& state, const SpacetimePoint& p) {
    const auto Y = spherical_harmonics_upto(state.l_max(), p.theta, p.phi);
    cplx s{};
    for (int l = 0; l <= state.l_max(); ++l) {
        cplx a{};
        for (int m = -l; m <= l; ++m) a += state.get(l, m) * Y[lm_index(l, m)];
        if (a != cplx{}) s += mode_radial(params, l, p.t).R * a;
    }
    return s;
}

// ---------------------------------------------------------------- sampling and inner products

SliceSamples sample_field(const Field& f, double t, const SphereGrid& grid) {
    SliceSamples s;
    s.value.resize(grid.size());
    s.dt.resize(grid.size());
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const SpacetimePoint p = grid.node(t, i, j);
            const std::size_t k = static_cast<std::size_t>(i) * grid.n_phi + j;
            s.value[k] = f.value(p);
            if (f.dt) {
                s.dt[k] = f.dt(p);
            } else {
                auto along = [&](double x) { return f.value(SpacetimePoint{x, p.theta, p.phi}); };
                s.dt[k] = fd5_first(along, t, grid.t_step);
            }
        }
    }
    return s;
}

namespace {

// Y_l^m for all l <= L at every grid node, node-major.
std::vector<std::vector<cplx>> grid_harmonics(int L, const SphereGrid& grid) {
    std::vector<std::vector<cplx>> Y(grid.size());
    for (int i = 0; i < grid.n_theta; ++i)
        for (int j = 0; j < grid.n_phi; ++j)
            Y[static_cast<std::size_t>(i) * grid.n_phi + j] = spherical_harmonics_upto(L, grid.theta[i], grid.phi[j]);
    return Y;
}

}  // namespace

SliceSamples sample_mode(const DeSitterParams& params, int l, int m, double t, const SphereGrid& grid, Energy e) {
    if (l < 0 || std::abs(m) > l) throw IndexError("mode index out of range");
    const RadialValue r = mode_radial(params, l, t, e);
    SliceSamples s;
    s.value.resize(grid.size());
    s.dt.resize(grid.size());
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const cplx y = spherical_harmonic(l, m, grid.theta[i], grid.phi[j]);
            const std::size_t k = static_cast<std::size_t>(i) * grid.n_phi + j;
            s.value[k] = r.R * y;
            s.dt[k] = r.dR * y;
        }
    }
    return s;
}

SliceSamples sample_state(const DeSitterParams& params, const StateCoefficients& state, double t,
                          const SphereGrid& grid) {
    const int L = state.l_max();
    std::vector<RadialValue> rad(L + 1);
    for (int l = 0; l <= L; ++l) rad[l] = mode_radial(params, l, t);
    SliceSamples s;
    s.value.assign(grid.size(), cplx{});
    s.dt.assign(grid.size(), cplx{});
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const auto Y = spherical_harmonics_upto(L, grid.theta[i], grid.phi[j]);
            const std::size_t k = static_cast<std::size_t>(i) * grid.n_phi + j;
            for (int l = 0; l <= L; ++l) {
                cplx a{};
                for (int m = -l; m <= l; ++m) a += state.get(l, m) * Y[lm_index(l, m)];
                s.value[k] += rad[l].R * a;
                s.dt[k] += rad[l].dR * a;
            }
        }
    }
    return s;
}

cplx l2_product(const std::vector<cplx>& f, const std::vector<cplx>& g, const SphereGrid& grid) {
    cplx acc{};
    for (int i = 0; i < grid.n_theta; ++i) {
        cplx row{};
        for (int j = 0; j < grid.n_phi; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * grid.n_phi + j;
            row += std::conj(f[k]) * g[k];
        }
        acc += grid.w_theta[i] * row;
    }
    return acc * grid.w_phi;
}

cplx inner_product(const DeSitterParams& params, const SliceSamples& f, const SliceSamples& g, double t,
                   const SphereGrid& grid) {
    const double a = scale_factor(params, t);
    return cplx(0.0, 1.0) * a * a * (l2_product(f.value, g.dt, grid) - l2_product(f.dt, g.value, grid));
}

InnerProductResult inner_product(const DeSitterParams& params, const Field& f, const Field& g, double t,
                                 const SphereGrid& grid) {
    InnerProductResult r;
    const int bw = grid.bandwidth();
    r.under_resolved = f.bandwidth < 0 || g.bandwidth < 0 || f.bandwidth > bw || g.bandwidth > bw;
    r.value = inner_product(params, sample_field(f, t, grid), sample_field(g, t, grid), t, grid);
    return r;
}

Eigen::MatrixXcd orthonormality_matrix(const DeSitterParams& params, int l_max, double t, const SphereGrid& grid,
                                       Sector sector) {
    if (l_max < 0) throw IndexError("l_max must be nonnegative");
    if (grid.bandwidth() < l_max) throw std::invalid_argument("grid is not exact to degree 2 l_max");
    const int n = (l_max + 1) * (l_max + 1);
    const std::size_t N = grid.size();
    const auto Y = grid_harmonics(l_max, grid);
    const Energy e_left = sector == Sector::VV ? Energy::Negative : Energy::Positive;
    const Energy e_right = sector == Sector::UU ? Energy::Positive : Energy::Negative;
    std::vector<RadialValue> rl(l_max + 1), rr(l_max + 1);
    for (int l = 0; l <= l_max; ++l) {
        rl[l] = mode_radial(params, l, t, e_left);
        rr[l] = mode_radial(params, l, t, e_right);
    }
    // columns: sampled modes, rows: weighted nodes
    Eigen::MatrixXcd Fv(N, n), Fd(N, n), Gv(N, n), Gd(N, n);
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * grid.n_phi + j;
            const double sw = std::sqrt(grid.weight(i, j));
            for (int l = 0; l <= l_max; ++l) {
                for (int m = -l; m <= l; ++m) {
                    const int c = lm_index(l, m);
                    const cplx y = Y[k][c] * sw;
                    Fv(k, c) = rl[l].R * y;
                    Fd(k, c) = rl[l].dR * y;
                    Gv(k, c) = rr[l].R * y;
                    Gd(k, c) = rr[l].dR * y;
                }
            }
        }
    }
    const double a = scale_factor(params, t);
    return cplx(0.0, a * a) * (Fv.adjoint() * Gd - Fd.adjoint() * Gv);
}

double max_deviation(const Eigen::MatrixXcd& gram, cplx diagonal) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
            d = std::max(d, std::abs(gram(i, j) - (i == j ? diagonal : cplx{})));
    return d;
}

TwoPointResult two_point_G(const DeSitterParams& params, const SpacetimePoint& p1, double t2, int l_max) {
    if (l_max < 0) throw IndexError("l_max must be nonnegative");
    const auto Y1 = spherical_harmonics_upto(l_max, p1.theta, p1.phi);
    const auto Y2 = spherical_harmonics_upto(l_max, 0.0, 0.0);
    TwoPointResult r{};
    for (int l = 0; l <= l_max; ++l) {
        const cplx R1 = mode_radial(params, l, p1.t).R;
        const cplx R2 = mode_radial(params, l, t2).R;
        cplx shell{};
        for (int m = -l; m <= l; ++m) shell += Y1[lm_index(l, m)] * std::conj(Y2[lm_index(l, m)]);
        shell *= R1 * std::conj(R2);
        r.value += shell;
        r.last_shell = shell;
    }
    return r;
}

std::pair<cplx, cplx> large_mass_product_check(const DeSitterParams& params, const StateCoefficients& f,
                                               const StateCoefficients& g, double t, const SphereGrid& grid) {
    const SliceSamples sf = sample_state(params, f, t, grid);
    const SliceSamples sg = sample_state(params, g, t, grid);
    const double a = scale_factor(params, t);
    const cplx exact = inner_product(params, sf, sg, t, grid);
    const cplx approx = 2.0 * params.mu() * a * a * l2_product(sf.value, sg.value, grid);
    return {exact, approx};
}

}  // namespace dsnw
