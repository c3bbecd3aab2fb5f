#include "modspace/gabor.hpp"

#include <cmath>
#include <numbers>

#include "modspace/fourier.hpp"

namespace modspace {

namespace {

double pow_int(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// (2pi)^{-d/2} h^d, the forward measure constant of the table in fourier.hpp.
double stft_scale(const GridSpec& g) {
    return std::pow(2.0 * std::numbers::pi, -0.5 * g.dim) * pow_int(g.step, g.dim);
}

} // namespace

Window gaussian_window(const GridSpec& grid) {
    Window w;
    w.kind = Window::Kind::gaussian;
    w.field = SampledField(grid);
    std::vector<int> idx(grid.dim);
    const double amp = std::pow(std::numbers::pi, -0.25 * grid.dim);
    for (std::size_t i = 0; i < w.field.values.size(); ++i) {
        unflatten(i, grid.dim, grid.n, idx);
        double n2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            double x = grid.coord(idx[a]);
            n2 += x * x;
        }
        w.field.values[i] = amp * std::exp(-0.5 * n2);
    }
    w.l2_grid = w.field.l2_grid_norm();
    w.l2_continuum = 1.0;
    return w;
}

Window custom_window(SampledField f) {
    f.check_finite();
    Window w;
    w.kind = Window::Kind::custom;
    w.field = std::move(f);
    w.l2_grid = w.field.l2_grid_norm();
    require(w.l2_grid > 0.0, ErrorCode::bad_argument, "window must be nonzero");
    w.l2_continuum = w.l2_grid;
    return w;
}

SampledField gaussian_peak_field(const GridSpec& grid) {
    SampledField f(grid);
    std::vector<int> idx(grid.dim);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        unflatten(i, grid.dim, grid.n, idx);
        double n2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            double x = grid.coord(idx[a]);
            n2 += x * x;
        }
        f.values[i] = std::exp(-0.5 * n2);
    }
    return f;
}

std::vector<int> PhaseSpaceArray::shape() const {
    std::vector<int> s(2 * grid.dim);
    for (int a = 0; a < grid.dim; ++a) s[a] = nx();
    for (int a = 0; a < grid.dim; ++a) s[grid.dim + a] = nk();
    return s;
}

std::size_t PhaseSpaceArray::lattice_size() const {
    std::size_t t = 1;
    for (int a = 0; a < grid.dim; ++a) t *= static_cast<std::size_t>(nx()) * static_cast<std::size_t>(nk());
    return t;
}

namespace {

PhaseSpaceArray stft_strided(const SampledField& f, const Window& phi, int a_step, int b_step) {
    const GridSpec& grid = f.grid;
    require(grid == phi.field.grid, ErrorCode::grid_mismatch, "field and window live on different grids");
    require(a_step >= 1 && b_step >= 1 && grid.n % a_step == 0 && grid.n % b_step == 0,
            ErrorCode::bad_argument, "strides must divide N");

    const int d = grid.dim;
    const int N = grid.n;
    const int mx = N / a_step;
    const int mk = N / b_step;

    PhaseSpaceArray out;
    out.grid = grid;
    out.a_step = a_step;
    out.b_step = b_step;
    out.values.assign(out.lattice_size(), Complex(0, 0));

    const double s0 = stft_scale(grid);
    const std::size_t cube = grid.size();
    std::vector<int> shape(d, N);
    std::vector<int> axes(d);
    for (int a = 0; a < d; ++a) axes[a] = a;

    std::vector<Complex> work(cube);
    std::vector<int> shift(d), midx(d), widx(d), kidx(d);

    std::size_t nshifts = 1;
    for (int a = 0; a < d; ++a) nshifts *= static_cast<std::size_t>(mx);

    for (std::size_t s = 0; s < nshifts; ++s) {
        // strided spatial shift n = shift * a_step per axis
        std::size_t rs = s;
        for (int a = d - 1; a >= 0; --a) {
            shift[a] = static_cast<int>(rs % mx) * a_step;
            rs /= mx;
        }
        // windowed copy: work[m] = f[m] conj(phi(x_m - x_n)), the translate
        // centered at the lattice point x_n = coord(shift)
        for (std::size_t m = 0; m < cube; ++m) {
            unflatten(m, d, N, midx);
            for (int a = 0; a < d; ++a) widx[a] = grid.wrap(midx[a] - shift[a] + N / 2);
            work[m] = f.values[m] * std::conj(phi.field.values[flatten(widx, N)]);
        }
        centered_dft_axes(work, shape, axes);

        // subsample frequency axes at multiples of b_step
        std::size_t nfreq = 1;
        for (int a = 0; a < d; ++a) nfreq *= static_cast<std::size_t>(mk);
        for (std::size_t q = 0; q < nfreq; ++q) {
            std::size_t rq = q;
            for (int a = d - 1; a >= 0; --a) {
                kidx[a] = static_cast<int>(rq % mk) * b_step;
                rq /= mk;
            }
            out.values[s * nfreq + q] = s0 * work[flatten(kidx, N)];
        }
    }
    return out;
}

} // namespace

PhaseSpaceArray stft(const SampledField& f, const Window& phi) { return stft_strided(f, phi, 1, 1); }

GaborSystem::GaborSystem(const GridSpec& g, int a, int b, Window w)
    : grid(g), a_step(a), b_step(b), window(std::move(w)) {
    require(grid == window.field.grid, ErrorCode::grid_mismatch, "window grid mismatch");
    require(a_step >= 1 && b_step >= 1 && grid.n % a_step == 0 && grid.n % b_step == 0,
            ErrorCode::bad_argument, "strides must divide N");
}

PhaseSpaceArray gabor_coefficients(const SampledField& f, const GaborSystem& system) {
    require(f.grid == system.grid, ErrorCode::grid_mismatch, "field grid mismatch");
    return stft_strided(f, system.window, system.a_step, system.b_step);
}

namespace {

// Columns are the atoms E_{n,k} over the strided lattice, n-major then k.
CMatrix atom_matrix(const GaborSystem& system, const Window& w) {
    const GridSpec& grid = system.grid;
    const int d = grid.dim;
    const int N = grid.n;
    const int mx = N / system.a_step;
    const int mk = N / system.b_step;
    const GridSpec dual = grid.dual();

    std::size_t cube = grid.size();
    std::size_t L = 1;
    for (int a = 0; a < d; ++a) L *= static_cast<std::size_t>(mx) * static_cast<std::size_t>(mk);
    require(cube <= 4096, ErrorCode::bad_argument, "dense Gabor matrices guarded at 4096 grid points");

    CMatrix atoms(cube, L);
    std::vector<int> shift(d), kidx(d), midx(d), widx(d);
    std::size_t nfreq = 1, nshift = 1;
    for (int a = 0; a < d; ++a) {
        nfreq *= static_cast<std::size_t>(mk);
        nshift *= static_cast<std::size_t>(mx);
    }

    for (std::size_t s = 0; s < nshift; ++s) {
        std::size_t rs = s;
        for (int a = d - 1; a >= 0; --a) {
            shift[a] = static_cast<int>(rs % mx) * system.a_step;
            rs /= mx;
        }
        for (std::size_t q = 0; q < nfreq; ++q) {
            std::size_t rq = q;
            for (int a = d - 1; a >= 0; --a) {
                kidx[a] = static_cast<int>(rq % mk) * system.b_step;
                rq /= mk;
            }
            const std::size_t col = s * nfreq + q;
            for (std::size_t m = 0; m < cube; ++m) {
                unflatten(m, d, N, midx);
                double phase = 0.0;
                for (int a = 0; a < d; ++a) {
                    widx[a] = grid.wrap(midx[a] - shift[a] + N / 2);
                    phase += grid.coord(midx[a]) * dual.coord(kidx[a]);
                }
                atoms(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(col)) =
                    std::polar(1.0, phase) * w.field.values[flatten(widx, N)];
            }
        }
    }
    return atoms;
}

} // namespace

CMatrix frame_operator(const GaborSystem& system) {
    const double density = static_cast<double>(system.a_step) * system.b_step;
    require(density <= system.grid.n, ErrorCode::not_a_frame,
            "a_step * b_step exceeds N: lattice too sparse for a frame");
    CMatrix atoms = atom_matrix(system, system.window);
    return atoms * atoms.adjoint();
}

void compute_dual_window(GaborSystem& system) {
    CMatrix S = frame_operator(system);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(S);
    require(eig.info() == Eigen::Success, ErrorCode::numerical_failure, "frame operator eigensolve failed");
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    require(lo > 0.0 && hi / lo < 1e8, ErrorCode::not_a_frame, "frame operator singular or ill conditioned");
    system.frame_lower = lo;
    system.frame_upper = hi;

    Eigen::Map<const CVector> phi(system.window.field.values.data(),
                                  static_cast<Eigen::Index>(system.window.field.values.size()));
    CVector gamma = S.ldlt().solve(phi);

    SampledField dual_field(system.grid);
    for (std::size_t i = 0; i < dual_field.values.size(); ++i) dual_field.values[i] = gamma(static_cast<Eigen::Index>(i));
    system.dual = custom_window(std::move(dual_field));
}

SampledField gabor_synthesis(const PhaseSpaceArray& coeffs, const Window& psi) {
    const GridSpec& grid = coeffs.grid;
    require(grid == psi.field.grid, ErrorCode::grid_mismatch, "synthesis window grid mismatch");

    const int d = grid.dim;
    const int N = grid.n;
    const int mx = coeffs.nx();
    const int mk = coeffs.nk();
    const std::size_t cube = grid.size();

    std::size_t nshift = 1, nfreq = 1;
    for (int a = 0; a < d; ++a) {
        nshift *= static_cast<std::size_t>(mx);
        nfreq *= static_cast<std::size_t>(mk);
    }
    require(coeffs.values.size() == nshift * nfreq, ErrorCode::bad_argument, "coefficient shape mismatch");

    std::vector<int> shape(d, N);
    std::vector<int> axes(d);
    for (int a = 0; a < d; ++a) axes[a] = a;

    SampledField out(grid);
    std::vector<Complex> spec(cube), mod(cube);
    std::vector<int> shift(d), kidx(d), midx(d), widx(d);

    const double nc = 1.0 / stft_scale(grid); // synthesis carries the reciprocal constant

    for (std::size_t s = 0; s < nshift; ++s) {
        std::size_t rs = s;
        for (int a = d - 1; a >= 0; --a) {
            shift[a] = static_cast<int>(rs % mx) * coeffs.a_step;
            rs /= mx;
        }
        // zero-embed the strided frequency row and inverse-transform:
        // mod(x) = sum_k c(n,k) e^{i x xi_k}
        std::fill(spec.begin(), spec.end(), Complex(0, 0));
        for (std::size_t q = 0; q < nfreq; ++q) {
            std::size_t rq = q;
            for (int a = d - 1; a >= 0; --a) {
                kidx[a] = static_cast<int>(rq % mk) * coeffs.b_step;
                rq /= mk;
            }
            spec[flatten(kidx, N)] = coeffs.values[s * nfreq + q];
        }
        mod = spec;
        centered_idft_axes(mod, shape, axes);

        for (std::size_t m = 0; m < cube; ++m) {
            unflatten(m, d, N, midx);
            for (int a = 0; a < d; ++a) widx[a] = grid.wrap(midx[a] - shift[a] + N / 2);
            out.values[m] += nc * mod[m] * psi.field.values[flatten(widx, N)];
        }
    }
    return out;
}

double modulation_norm(const SampledField& f, const Window& phi, std::vector<double> p,
                       std::vector<double> q, const Weight& omega, ModulationFlavor flavor,
                       int a_step, int b_step) {
    const int d = f.grid.dim;
    PhaseSpaceArray coeffs = stft_strided(f, phi, a_step, b_step);

    std::vector<double> cell(2 * d);
    for (int a = 0; a < d; ++a) {
        cell[a] = a_step * f.grid.step;
        cell[d + a] = b_step * f.grid.freq_step();
    }
    MixedNormSpec spec = modulation_flavor_spec(std::move(p), std::move(q), d, flavor, omega, std::move(cell));

    std::vector<int> shape = coeffs.shape();
    std::vector<std::vector<double>> coords(2 * d);
    for (int a = 0; a < d; ++a) {
        coords[a].resize(coeffs.nx());
        for (int j = 0; j < coeffs.nx(); ++j) coords[a][j] = coeffs.x_coord(j);
        coords[d + a].resize(coeffs.nk());
        for (int k = 0; k < coeffs.nk(); ++k) coords[d + a][k] = coeffs.xi_coord(k);
    }
    return mixed_quasi_norm(coeffs.values, shape, coords, spec);
}

double modulation_norm(const SampledField& f, const Window& phi, double p, double q,
                       const Weight& omega, ModulationFlavor flavor, int a_step, int b_step) {
    std::vector<double> pv(f.grid.dim, p), qv(f.grid.dim, q);
    return modulation_norm(f, phi, pv, qv, omega, flavor, a_step, b_step);
}

CMatrix analysis_matrix(const GaborSystem& system) {
    CMatrix atoms = atom_matrix(system, system.window);
    return stft_scale(system.grid) * atoms.adjoint();
}

CMatrix synthesis_matrix(const GaborSystem& system, const Window& psi) {
    CMatrix atoms = atom_matrix(system, psi);
    return (1.0 / stft_scale(system.grid)) * atoms;
}

} // namespace modspace
