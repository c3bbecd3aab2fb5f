#ifndef MODSPACE_FOURIER_HPP
#define MODSPACE_FOURIER_HPP

#include <complex>
#include <span>
#include <vector>

#include "modspace/grid.hpp"

namespace modspace {

// Transform conventions used throughout the library.
//
// Continuum:   (F f)(xi)  = (2pi)^{-d/2} Int f(x)  e^{-i<x,xi>} dx
//              (F~ g)(x)  = (2pi)^{-d/2} Int g(xi) e^{+i<x,xi>} dxi
//
// Grid surrogates on x_m = (m-N/2)h, xi_k = (k-N/2)dxi, dxi = 2pi/(N h):
//
//   forward:   Fhat(xi_k) = (2pi)^{-d/2} h^d    Sum_m f(x_m)  e^{-i x_m xi_k}
//   inverse:   f(x_m)     = (2pi)^{-d/2} dxi^d  Sum_k Fhat(k) e^{+i x_m xi_k}
//
// Because N h dxi = 2pi these are exact inverses of each other.  The raw
// centered sums (without the (2pi)^{-d/2} h^d factors) are what
// centered_dft_axis / centered_idft_axis below compute; callers attach the
// measure factors.  All modules derive their constants from this table.

// Dense centered-DFT matrices for one axis of size n.
// fwd[k][m] = e^{-i x_m xi_k},  inv[m][k] = e^{+i x_m xi_k}.
struct DftTables {
    int n = 0;
    std::vector<Complex> fwd; // row-major n x n
    std::vector<Complex> inv;

    explicit DftTables(int n_);
};

const DftTables& dft_tables(int n);

// Apply an n x n matrix along `axis` of a row-major tensor with the given
// shape; out-of-place into `dst` (same shape).
void apply_axis_matrix(std::span<const Complex> src, std::span<Complex> dst,
                       std::span<const int> shape, int axis, const std::vector<Complex>& mat, int n);

// Raw centered sums along one axis (no measure factors, no 1/N).
void centered_dft_axis(std::vector<Complex>& data, std::span<const int> shape, int axis);
void centered_idft_axis(std::vector<Complex>& data, std::span<const int> shape, int axis);

// Centered sums over several axes.
void centered_dft_axes(std::vector<Complex>& data, std::span<const int> shape, std::span<const int> axes);
void centered_idft_axes(std::vector<Complex>& data, std::span<const int> shape, std::span<const int> axes);

// Band-limited 2x refinement of a periodic axis: n -> 2n samples on step
// h/2, exact for centered trig polynomials.  The -Nyquist bin is split
// symmetrically between +-Nyquist of the refined spectrum.
std::vector<Complex> refine2x_axis(std::span<const Complex> data, std::span<const int> shape, int axis);

} // namespace modspace

#endif
