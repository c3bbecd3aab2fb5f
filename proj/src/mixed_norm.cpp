#include "modspace/mixed_norm.hpp"

#include <algorithm>
#include <cmath>

#include "modspace/fourier.hpp"
#include "modspace/rng.hpp"

namespace modspace {

void MixedNormSpec::validate(int rank) const {
    require(static_cast<int>(exponents.size()) == rank, ErrorCode::bad_argument,
            "exponent count does not match array rank");
    for (double p : exponents)
        require(p > 0.0, ErrorCode::bad_argument, "exponents must be positive or inf");
    if (!permutation.empty()) {
        require(static_cast<int>(permutation.size()) == rank, ErrorCode::bad_argument,
                "permutation size does not match array rank");
        std::vector<bool> seen(rank, false);
        for (int v : permutation) {
            require(v >= 0 && v < rank && !seen[v], ErrorCode::bad_argument, "permutation is not a bijection");
            seen[v] = true;
        }
    }
    if (!cell.empty()) {
        require(static_cast<int>(cell.size()) == rank, ErrorCode::bad_argument,
                "cell volume count does not match array rank");
        for (double c : cell) require(c > 0.0, ErrorCode::bad_argument, "cell volumes must be positive");
    }
}

namespace {

// Reduce one axis of a row-major tensor of doubles.
std::vector<double> reduce_axis(const std::vector<double>& in, std::vector<int>& shape, int pos, double p,
                                double cellv) {
    std::size_t lead = 1, trail = 1;
    for (int a = 0; a < pos; ++a) lead *= static_cast<std::size_t>(shape[a]);
    for (std::size_t a = pos + 1; a < shape.size(); ++a) trail *= static_cast<std::size_t>(shape[a]);
    const int n = shape[pos];

    std::vector<double> out(lead * trail);
    for (std::size_t b = 0; b < lead; ++b) {
        const double* src = in.data() + b * static_cast<std::size_t>(n) * trail;
        double* dst = out.data() + b * trail;
        if (std::isinf(p)) {
            for (std::size_t j = 0; j < trail; ++j) {
                double m = 0.0;
                for (int i = 0; i < n; ++i) m = std::max(m, src[static_cast<std::size_t>(i) * trail + j]);
                dst[j] = m;
            }
        } else {
            for (std::size_t j = 0; j < trail; ++j) {
                long double acc = 0.0L;
                for (int i = 0; i < n; ++i) {
                    long double v = src[static_cast<std::size_t>(i) * trail + j];
                    acc += std::pow(v, static_cast<long double>(p));
                }
                acc *= static_cast<long double>(cellv);
                dst[j] = static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(p)));
            }
        }
    }
    shape.erase(shape.begin() + pos);
    return out;
}

} // namespace

double mixed_quasi_norm(std::span<const Complex> values, std::span<const int> shape,
                        const std::vector<std::vector<double>>& axis_coords, const MixedNormSpec& spec) {
    const int rank = static_cast<int>(shape.size());
    require(rank >= 1, ErrorCode::bad_argument, "rank must be at least 1");
    spec.validate(rank);

    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    require(values.size() == total, ErrorCode::bad_argument, "value count does not match shape");
    require(axis_coords.size() == static_cast<std::size_t>(rank), ErrorCode::bad_argument,
            "need coordinates per axis");
    for (int a = 0; a < rank; ++a)
        require(axis_coords[a].size() == static_cast<std::size_t>(shape[a]), ErrorCode::bad_argument,
                "axis coordinate count mismatch");

    // g0 = |F . omega| over the original indexing.
    std::vector<double> cur(total);
    const bool trivial = spec.weight.is_trivial();
    if (trivial) {
        for (std::size_t i = 0; i < total; ++i) {
            double m = std::abs(values[i]);
            require(std::isfinite(m), ErrorCode::bad_argument, "non-finite input value");
            cur[i] = m;
        }
    } else {
        std::vector<int> idx(rank, 0);
        std::vector<double> pt(rank);
        for (int a = 0; a < rank; ++a) pt[a] = axis_coords[a][0];
        for (std::size_t i = 0; i < total; ++i) {
            double m = std::abs(values[i]);
            require(std::isfinite(m), ErrorCode::bad_argument, "non-finite input value");
            cur[i] = m == 0.0 ? 0.0 : m * spec.weight.eval(pt);
            // odometer over the last axis fastest
            for (int a = rank - 1; a >= 0; --a) {
                if (++idx[a] < shape[a]) {
                    pt[a] = axis_coords[a][idx[a]];
                    break;
                }
                idx[a] = 0;
                pt[a] = axis_coords[a][0];
            }
        }
    }

    std::vector<int> inv_sigma(rank);
    if (spec.permutation.empty()) {
        for (int k = 0; k < rank; ++k) inv_sigma[k] = k;
    } else {
        for (int a = 0; a < rank; ++a) inv_sigma[spec.permutation[a]] = a;
    }

    std::vector<int> cur_shape(shape.begin(), shape.end());
    std::vector<int> axis_ids(rank);
    for (int a = 0; a < rank; ++a) axis_ids[a] = a;

    for (int k = 0; k < rank; ++k) {
        const int orig = inv_sigma[k];
        const int pos = static_cast<int>(std::find(axis_ids.begin(), axis_ids.end(), orig) - axis_ids.begin());
        const double cellv = spec.cell.empty() ? 1.0 : spec.cell[orig];
        cur = reduce_axis(cur, cur_shape, pos, spec.exponents[k], cellv);
        axis_ids.erase(axis_ids.begin() + pos);
    }
    return cur[0];
}

double mixed_quasi_norm(const SampledField& f, const MixedNormSpec& spec) {
    std::vector<int> shape(f.grid.dim, f.grid.n);
    std::vector<std::vector<double>> coords(f.grid.dim);
    for (int a = 0; a < f.grid.dim; ++a) {
        coords[a].resize(f.grid.n);
        for (int i = 0; i < f.grid.n; ++i) coords[a][i] = f.grid.coord(i);
    }
    return mixed_quasi_norm(f.values, shape, coords, spec);
}

MixedNormSpec modulation_flavor_spec(std::vector<double> p, std::vector<double> q, int d,
                                     ModulationFlavor flavor, const Weight& weight,
                                     std::vector<double> cell) {
    require(static_cast<int>(p.size()) == d && static_cast<int>(q.size()) == d, ErrorCode::bad_argument,
            "modulation flavor needs |p| = |q| = d");
    MixedNormSpec spec;
    spec.weight = weight;
    spec.cell = std::move(cell);
    spec.exponents.reserve(2 * d);
    spec.permutation.resize(2 * d);
    if (flavor == ModulationFlavor::M) {
        for (double v : p) spec.exponents.push_back(v);
        for (double v : q) spec.exponents.push_back(v);
        for (int j = 0; j < 2 * d; ++j) spec.permutation[j] = j;
    } else {
        for (double v : q) spec.exponents.push_back(v);
        for (double v : p) spec.exponents.push_back(v);
        for (int j = 0; j < d; ++j) {
            spec.permutation[j] = j + d;   // sigma_2
            spec.permutation[j + d] = j;
        }
    }
    return spec;
}

namespace {

// Coordinate-space circular convolution via centered DFT products.
SampledField coordinate_convolution_impl(const SampledField& f, const SampledField& g) {
    require(f.grid == g.grid, ErrorCode::grid_mismatch, "convolution needs identical grids");
    const GridSpec& grid = f.grid;
    std::vector<int> shape(grid.dim, grid.n);
    std::vector<int> axes(grid.dim);
    for (int a = 0; a < grid.dim; ++a) axes[a] = a;

    std::vector<Complex> fh = f.values;
    std::vector<Complex> gh = g.values;
    centered_dft_axes(fh, shape, axes);
    centered_dft_axes(gh, shape, axes);
    const double scale = 1.0 / std::pow(static_cast<double>(grid.n), grid.dim);
    for (std::size_t i = 0; i < fh.size(); ++i) fh[i] *= gh[i] * scale;
    centered_idft_axes(fh, shape, axes);
    return SampledField(grid, std::move(fh));
}

} // namespace

SampledField coordinate_convolution(const SampledField& f, const SampledField& g) {
    return coordinate_convolution_impl(f, g);
}

std::vector<Complex> discrete_convolution(const SampledField& f, const SampledField& g) {
    SampledField c = coordinate_convolution_impl(f, g);
    // index convention: shift every axis by -N/2 relative to coordinates
    const GridSpec& grid = f.grid;
    std::vector<Complex> out(c.values.size());
    std::vector<int> idx(grid.dim), src(grid.dim);
    const std::size_t total = grid.size();
    for (std::size_t i = 0; i < total; ++i) {
        unflatten(i, grid.dim, grid.n, idx);
        for (int a = 0; a < grid.dim; ++a) src[a] = grid.wrap(idx[a] - grid.n / 2);
        out[i] = c.values[flatten(src, grid.n)];
    }
    return out;
}

double weighted_lp_norm(const SampledField& f, std::span<const double> exponents, const Weight& omega) {
    MixedNormSpec spec;
    spec.exponents.assign(exponents.begin(), exponents.end());
    spec.weight = omega;
    return mixed_quasi_norm(f, spec);
}

namespace {

bool circular_moderate_ok(const GridSpec& grid, const Weight& omega, const Weight& v) {
    // omega(x (+) y) <= omega(x) v(y), with (+) the circular coordinate sum.
    const std::size_t total = grid.size();
    std::vector<int> ix(grid.dim), iy(grid.dim), is(grid.dim);
    std::vector<double> x(grid.dim), y(grid.dim), s(grid.dim);

    const bool exhaustive = total * total <= (1u << 20);
    Rng rng(0x5eedULL);
    const std::size_t trials = exhaustive ? total * total : (1u << 20);
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t a = exhaustive ? t / total : rng.next_u64() % total;
        std::size_t b = exhaustive ? t % total : rng.next_u64() % total;
        unflatten(a, grid.dim, grid.n, ix);
        unflatten(b, grid.dim, grid.n, iy);
        for (int k = 0; k < grid.dim; ++k) {
            is[k] = grid.wrap(ix[k] + iy[k] - grid.n / 2);
            x[k] = grid.coord(ix[k]);
            y[k] = grid.coord(iy[k]);
            s[k] = grid.coord(is[k]);
        }
        if (omega.log_eval(s) > omega.log_eval(x) + v.log_eval(y) + 1e-9) return false;
    }
    return true;
}

} // namespace

YoungCheckResult young_check(const SampledField& f1, const SampledField& f2, std::vector<double> p,
                             const Weight& omega, const Weight& v) {
    require(f1.grid == f2.grid, ErrorCode::grid_mismatch, "young check needs identical grids");
    require(static_cast<int>(p.size()) == f1.grid.dim, ErrorCode::bad_argument,
            "one exponent per axis expected");

    YoungCheckResult res;
    res.weight_precondition_ok = circular_moderate_ok(f1.grid, omega, v);

    SampledField conv = coordinate_convolution(f1, f2);
    res.lhs = weighted_lp_norm(conv, p, omega);

    std::vector<double> pmin(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) pmin[i] = std::min(p[i], 1.0);
    res.rhs = weighted_lp_norm(f1, p, omega) * weighted_lp_norm(f2, pmin, v);
    return res;
}

namespace {

SampledField exp_kernel(const GridSpec& grid, double r) {
    SampledField k(grid);
    std::vector<int> idx(grid.dim);
    std::vector<double> x(grid.dim);
    for (std::size_t i = 0; i < k.values.size(); ++i) {
        unflatten(i, grid.dim, grid.n, idx);
        double n2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            x[a] = grid.coord(idx[a]);
            n2 += x[a] * x[a];
        }
        k.values[i] = std::exp(-r * std::sqrt(n2));
    }
    return k;
}

} // namespace

ExpConvCheckResult exp_convolution_check(const SampledField& f, std::vector<double> p, const Weight& omega,
                                         double r) {
    require(r > 0.0, ErrorCode::bad_argument, "kernel rate must be positive");
    require(static_cast<int>(p.size()) == f.grid.dim, ErrorCode::bad_argument,
            "one exponent per axis expected");

    ExpConvCheckResult res;
    const Weight v = omega.certified_moderator();
    std::vector<double> pmin(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) pmin[i] = std::min(p[i], 1.0);

    SampledField kern = exp_kernel(f.grid, r);
    res.kernel_const = weighted_lp_norm(kern, pmin, v);

    GridSpec doubled(f.grid.dim, 2 * f.grid.n, f.grid.step);
    double c2 = weighted_lp_norm(exp_kernel(doubled, r), pmin, v);
    res.doubling_growth = std::abs(c2 - res.kernel_const) / res.kernel_const;
    res.admissible = std::isfinite(res.kernel_const) && res.doubling_growth < 0.05;

    res.lhs = weighted_lp_norm(coordinate_convolution(f, kern), p, omega);
    res.rhs = res.kernel_const * weighted_lp_norm(f, p, omega);
    return res;
}

} // namespace modspace
