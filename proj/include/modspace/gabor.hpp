#ifndef MODSPACE_GABOR_HPP
#define MODSPACE_GABOR_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/mixed_norm.hpp"
#include "modspace/weight.hpp"

namespace modspace {

using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

// Analysis window.  The canonical choice is the L2-normalized Gaussian
// pi^{-d/4} e^{-|x|^2/2}, whose continuum L2 norm is exactly 1; for custom
// windows the grid norm stands in for it.
struct Window {
    SampledField field;
    enum class Kind { gaussian, custom } kind = Kind::custom;
    double l2_grid = 0.0;
    double l2_continuum = 0.0;

    const GridSpec& grid() const { return field.grid; }
};

Window gaussian_window(const GridSpec& grid);
Window custom_window(SampledField f);

// e^{-|x|^2/2} sampled on the grid (value 1 at the origin), the standard
// peak-normalized factor for tensor extensions.
SampledField gaussian_peak_field(const GridSpec& grid);

// Time-frequency shift atom E_{n,k}(x) = e^{i x xi_k} phi(x - x_n), with the
// translate taken periodically.  Analysis inner products, the frame
// operator and synthesis all use this one convention.
//
// stft carries the forward measure constant s0 = (2pi)^{-d/2} h^d:
//   V[n,k] = s0 * sum_m f(x_m) conj(phi(x_{m-n})) e^{-i x_m xi_k}
// and gabor_synthesis carries its reciprocal, so analysis with a window
// followed by synthesis with the canonical dual is the identity.
struct PhaseSpaceArray {
    GridSpec grid;     // underlying d-dim spatial grid
    int a_step = 1;    // spatial stride (divides N)
    int b_step = 1;    // frequency stride (divides N)
    std::vector<Complex> values; // row-major, d spatial axes then d frequency axes

    int dim() const { return grid.dim; }
    int nx() const { return grid.n / a_step; }
    int nk() const { return grid.n / b_step; }
    std::vector<int> shape() const;
    std::size_t lattice_size() const;
    double x_coord(int j) const { return grid.coord(j * a_step); }
    double xi_coord(int k) const { return grid.dual().coord(k * b_step); }
};

PhaseSpaceArray stft(const SampledField& f, const Window& phi);

struct GaborSystem {
    GridSpec grid;
    int a_step = 1;
    int b_step = 1;
    Window window;
    std::optional<Window> dual;
    double frame_lower = 0.0; // measured bounds, filled by compute_dual_window
    double frame_upper = 0.0;

    GaborSystem(const GridSpec& g, int a, int b, Window w);
};

PhaseSpaceArray gabor_coefficients(const SampledField& f, const GaborSystem& system);

// Dense frame operator S = sum_lambda <., E_lambda> E_lambda (N^d x N^d).
CMatrix frame_operator(const GaborSystem& system);

// Canonical dual: solves S gamma = phi; records the measured frame bounds
// on the system and throws not_a_frame when S is singular to 1e8.
void compute_dual_window(GaborSystem& system);

SampledField gabor_synthesis(const PhaseSpaceArray& coeffs, const Window& psi);

// Modulation / Wiener-amalgam quasi-norm estimator: the mixed quasi-norm of
// the Gabor coefficients with cells (a h)^d x (b dxi)^d.
double modulation_norm(const SampledField& f, const Window& phi, std::vector<double> p,
                       std::vector<double> q, const Weight& omega, ModulationFlavor flavor,
                       int a_step = 1, int b_step = 1);

// Scalar-exponent convenience overload.
double modulation_norm(const SampledField& f, const Window& phi, double p, double q,
                       const Weight& omega, ModulationFlavor flavor, int a_step = 1, int b_step = 1);

// Dense analysis matrix (lattice x N^d) and synthesis matrix (N^d x lattice)
// in the stft / synthesis normalizations; used by the weighted Schatten
// conjugation.
CMatrix analysis_matrix(const GaborSystem& system);
CMatrix synthesis_matrix(const GaborSystem& system, const Window& psi);

} // namespace modspace

#endif
