#pragma once

#include <complex>
#include <string>

namespace dsnw {

using cplx = std::complex<double>;

enum class Series { Principal, Complementary };
enum class NuBranch { Plus, Minus };

std::string to_string(Series s);

// Physical configuration of the field on dS3 (hbar = 1).
struct DeSitterParams {
    double alpha = 1.0;
    double M = 0.0;
    cplx nu{};
    Series series = Series::Principal;
    NuBranch branch = NuBranch::Plus;

    // Throws std::invalid_argument for alpha <= 0 or M <= 0, ExcludedMassError for M = 1.
    static DeSitterParams make(double M, double alpha = 1.0, NuBranch branch = NuBranch::Plus);

    // mu^2 = m_p^2 + xi R with R = 6/alpha^2; M = alpha mu.
    static DeSitterParams from_coupling(double m_p, double xi, double alpha = 1.0,
                                        NuBranch branch = NuBranch::Plus);

    double mu() const { return M / alpha; }
    // nu(nu+1); equals 3/4 - M^2.
    cplx lambda() const { return nu * (nu + 1.0); }
    // Casimir value 3/4 - nu(nu+1).
    cplx casimir() const { return 0.75 - lambda(); }
};

struct SpacetimePoint {
    double t = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

}  // namespace dsnw
