#ifndef MODSPACE_GRID_HPP
#define MODSPACE_GRID_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "modspace/error.hpp"

namespace modspace {

using Complex = std::complex<double>;

// Uniform periodized grid: per axis, N points with spatial step h and
// coordinates x_n = (n - N/2) h, n = 0..N-1.  The frequency dual has the
// same N and step 2*pi/(N*h), so dual(dual(g)) == g exactly.
//
// dim == 0 is permitted internally (a single point, no axes); it shows up
// when a coordinate split leaves an empty block.  User-facing construction
// (files, C API) requires dim >= 1.
struct GridSpec {
    int dim = 1;
    int n = 4;
    double step = 1.0;

    GridSpec() = default;
    GridSpec(int dim_, int n_, double step_) : dim(dim_), n(n_), step(step_) { validate(); }

    void validate() const {
        require(dim >= 0, ErrorCode::bad_argument, "grid dimension must be nonnegative");
        require(n >= 4 && n % 2 == 0, ErrorCode::bad_argument, "grid size must be even and >= 4");
        require(step > 0.0 && std::isfinite(step), ErrorCode::bad_argument, "grid step must be positive");
    }

    double coord(int i) const { return (i - n / 2) * step; }
    double freq_step() const { return 2.0 * std::numbers::pi / (n * step); }

    // Index of the coordinate value x on this axis; x must sit exactly on
    // the grid up to `tol` in units of the step.
    int index_of(double x, double tol = 1e-9) const {
        double raw = x / step + n / 2.0;
        int i = static_cast<int>(std::lround(raw));
        require(std::abs(raw - i) <= tol, ErrorCode::bad_argument, "coordinate is not on the grid");
        return ((i % n) + n) % n;
    }

    int wrap(int i) const {
        int r = i % n;
        return r < 0 ? r + n : r;
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int k = 0; k < dim; ++k) s *= static_cast<std::size_t>(n);
        return s;
    }

    GridSpec dual() const {
        GridSpec g;
        g.dim = dim;
        g.n = n;
        g.step = freq_step();
        return g;
    }

    bool operator==(const GridSpec& o) const { return dim == o.dim && n == o.n && step == o.step; }
};

// Self-dual step h = sqrt(2*pi/N): spatial and frequency extents coincide.
inline GridSpec self_dual_grid(int dim, int n) {
    return GridSpec(dim, n, std::sqrt(2.0 * std::numbers::pi / n));
}

inline GridSpec dual_grid(const GridSpec& g) { return g.dual(); }

inline GridSpec product_grid(const GridSpec& a, const GridSpec& b) {
    require(a.n == b.n && a.step == b.step, ErrorCode::grid_mismatch,
            "product grid requires identical N and step");
    GridSpec g;
    g.dim = a.dim + b.dim;
    g.n = a.n;
    g.step = a.step;
    return g;
}

// Row-major multi-index helpers (axis 0 slowest).
inline std::size_t flatten(std::span<const int> idx, int n) {
    std::size_t f = 0;
    for (int i : idx) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    return f;
}

inline void unflatten(std::size_t flat, int dim, int n, std::span<int> out) {
    for (int k = dim - 1; k >= 0; --k) {
        out[k] = static_cast<int>(flat % static_cast<std::size_t>(n));
        flat /= static_cast<std::size_t>(n);
    }
}

// Complex values on a product grid, row-major, axis j indexes coordinate x_j.
struct SampledField {
    GridSpec grid;
    std::vector<Complex> values;

    SampledField() = default;
    explicit SampledField(const GridSpec& g) : grid(g), values(g.size(), Complex(0.0, 0.0)) {}
    SampledField(const GridSpec& g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
        require(values.size() == grid.size(), ErrorCode::bad_argument, "field value count does not match grid");
    }

    Complex& at(std::span<const int> idx) { return values[flatten(idx, grid.n)]; }
    const Complex& at(std::span<const int> idx) const { return values[flatten(idx, grid.n)]; }

    void check_finite() const {
        for (const Complex& v : values)
            require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::bad_argument,
                    "field contains non-finite values");
    }

    double l2_grid_norm() const {
        long double s = 0.0L;
        for (const Complex& v : values) s += static_cast<long double>(std::norm(v));
        return std::sqrt(static_cast<double>(s)) * std::pow(grid.step, grid.dim / 2.0);
    }
};

// Coordinate tuple of a flattened index.
inline void coords_of(const GridSpec& g, std::size_t flat, std::span<double> out) {
    for (int k = g.dim - 1; k >= 0; --k) {
        out[k] = g.coord(static_cast<int>(flat % static_cast<std::size_t>(g.n)));
        flat /= static_cast<std::size_t>(g.n);
    }
}

} // namespace modspace

#endif
