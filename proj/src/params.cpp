#include "dsnw/params.hpp"

#include <cmath>
#include <stdexcept>

#include "dsnw/errors.hpp"

namespace dsnw {

std::string to_string(Series s) {
    return s == Series::Principal ? "Principal" : "Complementary";
}

DeSitterParams DeSitterParams::make(double M, double alpha, NuBranch branch) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive and finite");
    if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("M must be positive and finite");
    if (std::abs(M - 1.0) <= 1e-12) throw ExcludedMassError("excluded case: M = 1 is not treated");

    DeSitterParams p;
    p.alpha = alpha;
    p.M = M;
    p.branch = branch;
    const double sgn = branch == NuBranch::Plus ? 1.0 : -1.0;
    if (M < 1.0) {
        p.series = Series::Complementary;
        p.nu = cplx(-0.5 + sgn * std::sqrt((1.0 - M) * (1.0 + M)), 0.0);
    } else {
        p.series = Series::Principal;
        p.nu = cplx(-0.5, sgn * std::sqrt((M - 1.0) * (M + 1.0)));
    }
    return p;
}

DeSitterParams DeSitterParams::from_coupling(double m_p, double xi, double alpha, NuBranch branch) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    const double R = 6.0 / (alpha * alpha);
    const double mu2 = m_p * m_p + xi * R;
    if (!(mu2 > 0.0)) throw std::invalid_argument("m_p^2 + xi R must be positive");
    return make(alpha * std::sqrt(mu2), alpha, branch);
}

}  // namespace dsnw
