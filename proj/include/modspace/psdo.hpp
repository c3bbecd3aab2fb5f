#ifndef MODSPACE_PSDO_HPP
#define MODSPACE_PSDO_HPP

#include <array>
#include <cstdint>
#include <string>

#include "modspace/gabor.hpp"
#include "modspace/grid.hpp"

namespace modspace {

// Coordinate convention for symbol and amplitude fields.  A symbol a0 lives
// on 2d axes: the first d are spatial (step h), the last d are frequency
// (step dxi = 2pi/(N h), read through grid.dual()).  An amplitude a lives on
// 3d axes (x, y, zeta) = (spatial, spatial, frequency).  The stored GridSpec
// carries the spatial step; frequency coordinates always come from the dual.
//
// All multiplier phases reduce to 2pi (j - N/2)(k - N/2) / N at the index
// level because paired blocks are mutually dual, so these operations are
// well defined for any step.

enum class Quantization { kohn_nirenberg, weyl, right }; // t = 0, 1/2, 1

double quantization_parameter(Quantization q);

struct OperatorMatrix {
    CMatrix m;          // N^d x N^d, row index = output grid point
    GridSpec grid;      // d-dim grid the operator acts on
    std::string provenance;
};

// Op_A with A = t I from a Kohn-Nirenberg-style symbol:
// M[m,n] = h^d (2pi)^{-d/2} (F2^{-1} a0)(x_m - t (x_m - x_n), x_m - x_n).
// The Weyl midpoint is evaluated on a 2x zero-pad-refined spatial grid.
OperatorMatrix op_from_symbol(const SampledField& a0, Quantization quant);

// Amplitude operator:
// M[m,n] = (2pi)^{-d} h^d dzeta^d sum_k a(x_m, x_n, zeta_k) e^{i (x_m - x_n) zeta_k}.
OperatorMatrix op_from_amplitude(const SampledField& a);

// e^{i sign scale <D_second, D_first>}: transform both axis blocks, scale
// the coefficient at dual pair (eta, u) by e^{i sign scale <u, eta>},
// transform back.  Blocks pair component-wise and must be mutually dual
// (one spatial-type, one frequency-type axis per pair).
SampledField exp_multiplier(const SampledField& u, std::span<const int> first_block,
                            std::span<const int> second_block, int sign, double scale);

// a2 with Op_{A1}(a1) = Op_{A2}(a2): the (t1 - t2)-scaled multiplier across
// the (x, xi) axis pair.
SampledField calculus_transfer(const SampledField& a1, Quantization a1_quant, Quantization a2_quant);

// Kohn-Nirenberg reduction a -> a0: shear y -> x + y, e^{i <D_zeta, D_y>},
// restrict y = 0.
SampledField reduce_amplitude(const SampledField& a);

// Right inverse of the reduction: a = e^{-i <D_zeta, D_y>} (a0(x,zeta) phi(y-x))
// for a peak-normalized phi (phi(0) = 1).
SampledField extend_symbol(const SampledField& a0, const SampledField& phi_peak);

// Amplitude-space modulation quasi-norm:
//   flavor M:  || V_phi a, sheared in the y slot ||_{L^{p1,p2,p3,q1,q2,q3}}
//   flavor W:  same coefficients through the block-swapped axis order.
// Requires a self-dual grid (the zeta axes are treated as STFT variables)
// and guards the 6d-axis coefficient tensor size.
double amplitude_mod_norm(const SampledField& a, const Window& phi3, std::array<double, 3> p,
                          std::array<double, 3> q, const Weight& omega, ModulationFlavor flavor,
                          int a_step = 1, int b_step = 1);

struct ContinuityConfig {
    int n_coarse = 12;
    int n_fine = 16;
    double p = inf_exponent; // amplitude-norm exponents (p, inf, p, q, q, q)
    double q = 1.0;
    double p1 = 2.0, q1 = 2.0; // source space
    double p2 = 2.0, q2 = 2.0; // target space
    Weight omega;              // on 6d phase-space coordinates
    Weight omega1, omega2;     // on 2d phase-space coordinates
    int family = 8;
    std::uint64_t seed = 7;
};

struct ContinuityReport {
    double amplitude_norm_coarse = 0.0;
    double amplitude_norm_fine = 0.0;
    double r_coarse = 0.0;
    double r_fine = 0.0;
    double growth = 0.0;
    double weight_sweep_max = 0.0; // max of omega2 / (omega1 omega) over the sweep
    bool degenerate = false;       // zero amplitude: family skipped
};

// R = max_f ||Op(a) f||_{M^{p2,q2}_(omega2)} / (||a|| ||f||_{M^{p1,q1}_(omega1)})
// for the amplitude built by extending a seeded Gaussian-type symbol.
ContinuityReport continuity_experiment(const ContinuityConfig& config, int threads = 1);

} // namespace modspace

#endif
