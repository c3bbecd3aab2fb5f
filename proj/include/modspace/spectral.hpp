#ifndef MODSPACE_SPECTRAL_HPP
#define MODSPACE_SPECTRAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "modspace/gabor.hpp"
#include "modspace/psdo.hpp"
#include "modspace/weight.hpp"

namespace modspace {

struct SingularSpectrum {
    std::vector<double> values; // nonincreasing
    std::string source;
};

// Singular values in nonincreasing order; dense decomposition, guarded at
// 4096 x 4096.
SingularSpectrum singular_values(const CMatrix& t, const std::string& source = "");

// ell^p quasi-norm of the spectrum (sup for p = inf).
double schatten_quasi_norm(const SingularSpectrum& s, double p);

// T~ = D_{omega2} C_phi T S_gamma D_{omega1}^{-1}: the Gabor-coefficient
// conjugation whose singular values stand in for the singular numbers of T
// between weighted M^2 spaces.  The system must carry its canonical dual;
// frame bounds enter the surrogate and are reported by the experiments.
CMatrix weighted_m2_conjugate(const CMatrix& t, const Weight& omega1, const Weight& omega2,
                              const GaborSystem& system);

struct SchattenBoundConfig {
    int n_coarse = 12;
    int n_fine = 16;
    double p = 2.0;
    double q = 1.0;
    Weight omega;   // on 6d amplitude phase-space coordinates
    Weight omega1;  // on 2d coordinates
    Weight omega2;  // on 2d coordinates
    int family = 10;
    std::uint64_t seed = 3;
};

struct SchattenBoundReport {
    std::vector<double> ratios_coarse;
    std::vector<double> ratios_fine;
    double max_coarse = 0.0;
    double max_fine = 0.0;
    double growth = 0.0;
    double i2_frobenius_max_relerr = 0.0; // only meaningful when p == 2
    double frame_lower = 0.0, frame_upper = 0.0;
    bool nuclear_surrogate = false;       // p <= 1: doubles as the nuclear-order-p number
    bool degenerate = false;
};

// Ratio ||Op(a)||_{I_p(M^2_(omega1), M^2_(omega2))} / ||a||_{M^{p,inf,p,q,q,q}_(omega)}
// over extensions of seeded random symbols, at two resolutions.
SchattenBoundReport schatten_bound_experiment(const SchattenBoundConfig& config, int threads = 1);

} // namespace modspace

#endif
