#ifndef MODSPACE_MIXED_NORM_HPP
#define MODSPACE_MIXED_NORM_HPP

#include <limits>
#include <span>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/weight.hpp"

namespace modspace {

inline constexpr double inf_exponent = std::numeric_limits<double>::infinity();

// One weighted mixed quasi-norm: stage k of the contraction consumes the
// original array axis sigma^{-1}(k) with the ell^{p_k} norm.  Finite
// exponents carry cell[axis]^{1/p_k}; exponent inf is a plain supremum.
// The weight is evaluated at the original (unpermuted) coordinate tuple.
//
// Worked 2x2 example, values [[1,2],[3,4]], p = (1, inf), weight 1, cell 1:
//   sigma = id        : stage 1 sums axis 0 -> [4, 6], stage 2 sup -> 6
//   sigma = (swap)    : stage 1 sums axis 1 -> [3, 7], stage 2 sup -> 7
struct MixedNormSpec {
    std::vector<double> exponents;   // stage-ordered, entries in (0, inf]
    std::vector<int> permutation;    // sigma, 0-based; empty = identity
    Weight weight;                   // defaults to 1
    std::vector<double> cell;        // per original axis; empty = all 1

    void validate(int rank) const;
};

double mixed_quasi_norm(std::span<const Complex> values, std::span<const int> shape,
                        const std::vector<std::vector<double>>& axis_coords, const MixedNormSpec& spec);

// Field overload: coordinates from the grid, one axis per grid dimension.
double mixed_quasi_norm(const SampledField& f, const MixedNormSpec& spec);

enum class ModulationFlavor { M, W };

// The 2d-axis spec realizing ||.||_{L^{p,q}} (flavor M: x axes first) or
// ||.||_{L^{p,q}_*} (flavor W: xi axes first, block-swap permutation).
MixedNormSpec modulation_flavor_spec(std::vector<double> p, std::vector<double> q, int d,
                                     ModulationFlavor flavor, const Weight& weight,
                                     std::vector<double> cell = {});

// Periodic convolutions on a homogeneous grid.  The index convention
// follows sequence indexing, (f*g)(n) = sum_m f(m) g(n-m mod N) per axis;
// the coordinate convention convolves over grid coordinates instead
// (identity element = spike at x = 0) and is what the weighted Young
// machinery uses.
std::vector<Complex> discrete_convolution(const SampledField& f, const SampledField& g);
SampledField coordinate_convolution(const SampledField& f, const SampledField& g);

// Plain weighted ell^p norm over the grid (sigma = id, cell 1).
double weighted_lp_norm(const SampledField& f, std::span<const double> exponents, const Weight& omega);

struct YoungCheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool weight_precondition_ok = true;
};

// lhs = ||f1 * f2||_{ell^p_(omega)}, rhs = ||f1||_{ell^p_(omega)} *
// ||f2||_{ell^{min(p,1)}_(v)}.  lhs <= rhs is guaranteed whenever
// omega(x (+) y) <= omega(x) v(y) holds for the circular coordinate sum,
// which is what the precondition sweep checks.
YoungCheckResult young_check(const SampledField& f1, const SampledField& f2, std::vector<double> p,
                             const Weight& omega, const Weight& v);

struct ExpConvCheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double kernel_const = 0.0;  // C = ||e^{-r|.|}||_{ell^{min(p,1)}_(v)}
    double doubling_growth = 0.0;
    bool admissible = false;
};

// Convolution against e^{-r|.|}: admissible when the kernel constant is
// stable (< 5% relative change) under doubling the grid extent at fixed
// step, the lattice surrogate of Eq-style absolute convergence.
ExpConvCheckResult exp_convolution_check(const SampledField& f, std::vector<double> p, const Weight& omega,
                                         double r);

} // namespace modspace

#endif
