#ifndef MODSPACE_TRACE_HPP
#define MODSPACE_TRACE_HPP

#include <cstdint>
#include <vector>

#include "modspace/gabor.hpp"
#include "modspace/grid.hpp"
#include "modspace/weight.hpp"

namespace modspace {

// Coordinate split x = (x1, x2, x3) with the restriction point z in the x2
// block.  z must sit on the grid; the snap distance is recorded and strict
// construction rejects off-grid points.
struct DimSplit {
    int d1 = 0, d2 = 0, d3 = 0;
    std::vector<int> z_index;   // grid index of z per x2 axis
    std::vector<double> z;      // snapped coordinates
    double snap_distance = 0.0;

    int dim() const { return d1 + d2 + d3; }
    int trace_dim() const { return d1 + d3; }
};

DimSplit make_split(const GridSpec& grid, int d1, int d2, int d3, std::vector<double> z_request,
                    bool strict = true);

// (Tr_z f)(x1, x3) = f(x1, z, x3).
SampledField trace_map(const SampledField& f, const DimSplit& split);

// f(x1, x2, x3) = f0(x1, x3) phi(x2 - z) with periodic shift; phi must have
// phi(0) = 1 so that trace_map(tensor_extension(f0)) == f0 exactly.
SampledField tensor_extension(const SampledField& f0, const SampledField& phi2_peak, const DimSplit& split);

// Residual of the STFT trace identity: compares the direct STFT of the
// slice against the phase-space average
//   (2pi)^{-d2/2} ||phi2||_{L2}^{-2} Sum_{y,eta} V_phi f(x1,y,x3,xi1,eta,xi3)
//                                    phi2(z-y) e^{+i z.eta} h^{d2} dxi^{d2}
// with phi = phi0 (x) phi2.  The continuum L2 norm of the window enters, so
// the residual is a genuine discretization diagnostic (it vanishes under
// refinement rather than being identically zero in exact arithmetic).
double stft_trace_identity_residual(const SampledField& f, const DimSplit& split, const Window& phi0,
                                    const Window& phi2);

struct TraceBoundConfig {
    int d1 = 1, d2 = 1, d3 = 0;
    int n_coarse = 16;
    int n_fine = 32;
    std::vector<double> p, q;    // exponents per axis on the full grid (d1+d2+d3)
    std::vector<double> p0, q0;  // exponents per axis on the sliced grid (d1+d3)
    Weight omega;                // on 2(d1+d2+d3) phase-space coordinates
    Weight omega0;               // on 2(d1+d3) phase-space coordinates
    Weight theta;                // on d2 + d3 frequency coordinates
    double r_exponent = 2.0;
    std::vector<double> z;       // restriction point, defaults to 0
    int family_random = 40;
    int family_adversarial = 10;
    std::uint64_t seed = 1;
    bool require_finite_theta = true; // false: run as a divergence diagnostic
};

struct TraceBoundReport {
    double c_theta = 0.0;
    bool theta_finite = false;
    double r_coarse = 0.0;
    double r_fine = 0.0;
    double growth = 0.0;          // r_fine / r_coarse
    std::vector<double> ratios_fine;
};

// Measures R = max_f ||Tr_z f||_{M^{p0,q0}_(omega0)} / ||f||_{M^{p,q}_(omega)}
// over a seeded family (Gaussian-envelope coefficient draws plus members
// modulated to the top of the frequency window) at two resolutions.
TraceBoundReport trace_bound_experiment(const TraceBoundConfig& config, int threads = 1);

} // namespace modspace

#endif
