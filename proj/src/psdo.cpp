#include "modspace/psdo.hpp"

#include <cmath>
#include <numbers>

#include "modspace/fourier.hpp"
#include "modspace/parallel.hpp"
#include "modspace/rng.hpp"

namespace modspace {

double quantization_parameter(Quantization q) {
    switch (q) {
        case Quantization::kohn_nirenberg: return 0.0;
        case Quantization::weyl: return 0.5;
        case Quantization::right: return 1.0;
    }
    fail(ErrorCode::bad_argument, "unsupported quantization");
}

namespace {

double pow_int(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// (F2^{-1} a0)(x, u): raw inverse sums over the frequency block times
// (2pi)^{-d/2} dxi^d; u lands on the spatial-step grid.
std::vector<Complex> partial_inverse_freq(const SampledField& a, int first_freq_axis, int d) {
    std::vector<int> shape(a.grid.dim, a.grid.n);
    std::vector<int> axes(d);
    for (int i = 0; i < d; ++i) axes[i] = first_freq_axis + i;
    std::vector<Complex> b = a.values;
    centered_idft_axes(b, shape, axes);
    const double scale = std::pow(2.0 * std::numbers::pi, -0.5 * d) * pow_int(a.grid.freq_step(), d);
    for (Complex& v : b) v *= scale;
    return b;
}

} // namespace

OperatorMatrix op_from_symbol(const SampledField& a0, Quantization quant) {
    const GridSpec& g2 = a0.grid;
    require(g2.dim % 2 == 0 && g2.dim >= 2, ErrorCode::bad_argument, "symbol must live on 2d axes");
    const int d = g2.dim / 2;
    const int N = g2.n;
    const double t = quantization_parameter(quant);

    std::vector<Complex> b = partial_inverse_freq(a0, d, d); // B(x, u), both on step-h axes

    GridSpec g(d, N, g2.step);
    const std::size_t cube = g.size();
    const double front = pow_int(g.step, d) * std::pow(2.0 * std::numbers::pi, -0.5 * d);

    OperatorMatrix op;
    op.grid = g;
    op.provenance = quant == Quantization::kohn_nirenberg ? "symbol+t0"
                    : quant == Quantization::weyl          ? "symbol+t1/2"
                                                           : "symbol+t1";
    op.m.resize(static_cast<Eigen::Index>(cube), static_cast<Eigen::Index>(cube));

    std::vector<int> midx(d), nidx(d), widx(2 * d);

    if (quant == Quantization::weyl) {
        // Refine the d spatial axes once each; the midpoint (x_m + x_n)/2 is
        // the refined point of index m + n.  When the offset x_m - x_n falls
        // outside the principal window and wraps by sigma N h, the midpoint
        // of the aliased kernel branch shifts by -sigma N h / 2, i.e. sigma N
        // refined steps; picking the matching branch keeps the periodized
        // Weyl kernel consistent with the transfer calculus.
        std::vector<int> shape(2 * d, N);
        std::vector<Complex> refined = b;
        for (int a = 0; a < d; ++a) {
            refined = refine2x_axis(refined, shape, a);
            shape[a] = 2 * N;
        }
        for (std::size_t m = 0; m < cube; ++m) {
            unflatten(m, d, N, midx);
            for (std::size_t n = 0; n < cube; ++n) {
                unflatten(n, d, N, nidx);
                std::size_t flat = 0;
                for (int a = 0; a < d; ++a) {
                    int raw = midx[a] - nidx[a] + N / 2;
                    int sigma = raw < 0 ? -1 : (raw >= N ? 1 : 0);
                    int mid = midx[a] + nidx[a] + sigma * N;
                    mid = ((mid % (2 * N)) + 2 * N) % (2 * N);
                    flat = flat * static_cast<std::size_t>(2 * N) + static_cast<std::size_t>(mid);
                }
                for (int a = 0; a < d; ++a)
                    flat = flat * static_cast<std::size_t>(N) +
                           static_cast<std::size_t>(g.wrap(midx[a] - nidx[a] + N / 2));
                op.m(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = front * refined[flat];
            }
        }
        return op;
    }

    for (std::size_t m = 0; m < cube; ++m) {
        unflatten(m, d, N, midx);
        for (std::size_t n = 0; n < cube; ++n) {
            unflatten(n, d, N, nidx);
            for (int a = 0; a < d; ++a) {
                widx[a] = t == 0.0 ? midx[a] : nidx[a]; // x - t(x-y) at t in {0,1}
                widx[d + a] = g.wrap(midx[a] - nidx[a] + N / 2);
            }
            op.m(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = front * b[flatten(widx, N)];
        }
    }
    return op;
}

OperatorMatrix op_from_amplitude(const SampledField& a) {
    const GridSpec& g3 = a.grid;
    require(g3.dim % 3 == 0 && g3.dim >= 3, ErrorCode::bad_argument, "amplitude must live on 3d axes");
    const int d = g3.dim / 3;
    const int N = g3.n;

    std::vector<Complex> b = partial_inverse_freq(a, 2 * d, d); // B(x, y, u)

    GridSpec g(d, N, g3.step);
    const std::size_t cube = g.size();
    const double front = pow_int(g.step, d) * std::pow(2.0 * std::numbers::pi, -0.5 * d);

    OperatorMatrix op;
    op.grid = g;
    op.provenance = "amplitude";
    op.m.resize(static_cast<Eigen::Index>(cube), static_cast<Eigen::Index>(cube));

    std::vector<int> midx(d), nidx(d), widx(3 * d);
    for (std::size_t m = 0; m < cube; ++m) {
        unflatten(m, d, N, midx);
        for (std::size_t n = 0; n < cube; ++n) {
            unflatten(n, d, N, nidx);
            for (int a3 = 0; a3 < d; ++a3) {
                widx[a3] = midx[a3];
                widx[d + a3] = nidx[a3];
                widx[2 * d + a3] = g.wrap(midx[a3] - nidx[a3] + N / 2);
            }
            op.m(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = front * b[flatten(widx, N)];
        }
    }
    return op;
}

SampledField exp_multiplier(const SampledField& u, std::span<const int> first_block,
                            std::span<const int> second_block, int sign, double scale) {
    require(first_block.size() == second_block.size() && !first_block.empty(), ErrorCode::bad_argument,
            "multiplier blocks must pair component-wise");
    require(sign == 1 || sign == -1, ErrorCode::bad_argument, "sign must be +-1");
    const GridSpec& g = u.grid;
    for (std::size_t i = 0; i < first_block.size(); ++i) {
        require(first_block[i] >= 0 && first_block[i] < g.dim, ErrorCode::bad_argument, "axis out of range");
        require(second_block[i] >= 0 && second_block[i] < g.dim, ErrorCode::bad_argument, "axis out of range");
        require(first_block[i] != second_block[i], ErrorCode::bad_argument, "blocks must be disjoint");
    }

    const int N = g.n;
    std::vector<int> shape(g.dim, N);
    std::vector<int> axes;
    axes.insert(axes.end(), first_block.begin(), first_block.end());
    axes.insert(axes.end(), second_block.begin(), second_block.end());

    SampledField out = u;
    if (scale == 0.0) return out;

    centered_dft_axes(out.values, shape, axes);

    const double unit = 2.0 * std::numbers::pi / N; // <u, eta> per dual index pair
    std::vector<int> idx(g.dim);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        unflatten(i, g.dim, N, idx);
        double phase = 0.0;
        for (std::size_t a = 0; a < first_block.size(); ++a)
            phase += static_cast<double>(idx[first_block[a]] - N / 2) *
                     static_cast<double>(idx[second_block[a]] - N / 2);
        out.values[i] *= std::polar(1.0, sign * scale * unit * phase);
    }

    centered_idft_axes(out.values, shape, axes);
    const double norm = 1.0 / pow_int(static_cast<double>(N), static_cast<int>(axes.size()));
    for (Complex& v : out.values) v *= norm;
    return out;
}

SampledField calculus_transfer(const SampledField& a1, Quantization a1_quant, Quantization a2_quant) {
    const GridSpec& g2 = a1.grid;
    require(g2.dim % 2 == 0 && g2.dim >= 2, ErrorCode::bad_argument, "symbol must live on 2d axes");
    const int d = g2.dim / 2;
    const double dt = quantization_parameter(a1_quant) - quantization_parameter(a2_quant);
    if (dt == 0.0) return a1;

    std::vector<int> xb(d), fb(d);
    for (int a = 0; a < d; ++a) {
        xb[a] = a;
        fb[a] = d + a;
    }
    return exp_multiplier(a1, xb, fb, +1, dt);
}

namespace {

// shear a(x, y, zeta) -> a(x, x + y, zeta) on matching sub-lattices; the
// (N/2)/stride offset keeps the origin fixed.
std::vector<Complex> shear_second_block(std::span<const Complex> values, int d, int size_per_axis,
                                        int origin_offset) {
    const int M = size_per_axis;
    std::vector<int> shape(3 * d, M);
    std::vector<Complex> out(values.size());
    std::vector<int> idx(3 * d), src(3 * d);
    for (std::size_t i = 0; i < out.size(); ++i) {
        unflatten(i, 3 * d, M, idx);
        for (int a = 0; a < 3 * d; ++a) src[a] = idx[a];
        for (int a = 0; a < d; ++a) {
            int s = (idx[a] + idx[d + a] - origin_offset) % M;
            src[d + a] = s < 0 ? s + M : s;
        }
        out[i] = values[flatten(src, M)];
    }
    return out;
}

} // namespace

SampledField reduce_amplitude(const SampledField& a) {
    const GridSpec& g3 = a.grid;
    require(g3.dim % 3 == 0 && g3.dim >= 3, ErrorCode::bad_argument, "amplitude must live on 3d axes");
    const int d = g3.dim / 3;
    const int N = g3.n;

    SampledField sheared(g3, shear_second_block(a.values, d, N, N / 2));

    std::vector<int> yb(d), zb(d);
    for (int i = 0; i < d; ++i) {
        yb[i] = d + i;
        zb[i] = 2 * d + i;
    }
    SampledField mult = exp_multiplier(sheared, yb, zb, +1, 1.0);

    // restrict y = 0 (index N/2 per y axis)
    GridSpec g2(2 * d, N, g3.step);
    SampledField out(g2);
    std::vector<int> oidx(2 * d), fidx(3 * d);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        unflatten(i, 2 * d, N, oidx);
        for (int a = 0; a < d; ++a) {
            fidx[a] = oidx[a];
            fidx[d + a] = N / 2;
            fidx[2 * d + a] = oidx[d + a];
        }
        out.values[i] = mult.values[flatten(fidx, N)];
    }
    return out;
}

SampledField extend_symbol(const SampledField& a0, const SampledField& phi_peak) {
    const GridSpec& g2 = a0.grid;
    require(g2.dim % 2 == 0 && g2.dim >= 2, ErrorCode::bad_argument, "symbol must live on 2d axes");
    const int d = g2.dim / 2;
    const int N = g2.n;
    require(phi_peak.grid.dim == d && phi_peak.grid.n == N && phi_peak.grid.step == g2.step,
            ErrorCode::grid_mismatch, "extension factor must live on the d-dim grid");

    std::vector<int> center(d, N / 2);
    require(std::abs(phi_peak.values[flatten(center, N)] - Complex(1.0, 0.0)) <= 1e-12,
            ErrorCode::bad_argument, "extension factor must satisfy phi(0) = 1");

    GridSpec g3(3 * d, N, g2.step);
    SampledField c(g3);
    std::vector<int> idx(3 * d), sidx(2 * d), pidx(d);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        unflatten(i, 3 * d, N, idx);
        for (int a = 0; a < d; ++a) {
            sidx[a] = idx[a];
            sidx[d + a] = idx[2 * d + a];
            pidx[a] = c.grid.wrap(idx[d + a] - idx[a] + N / 2); // phi(y - x)
        }
        c.values[i] = a0.values[flatten(sidx, N)] * phi_peak.values[flatten(pidx, N)];
    }

    std::vector<int> yb(d), zb(d);
    for (int i = 0; i < d; ++i) {
        yb[i] = d + i;
        zb[i] = 2 * d + i;
    }
    return exp_multiplier(c, yb, zb, -1, 1.0);
}

double amplitude_mod_norm(const SampledField& a, const Window& phi3, std::array<double, 3> p,
                          std::array<double, 3> q, const Weight& omega, ModulationFlavor flavor,
                          int a_step, int b_step) {
    const GridSpec& g3 = a.grid;
    require(g3.dim % 3 == 0 && g3.dim >= 3, ErrorCode::bad_argument, "amplitude must live on 3d axes");
    const int d = g3.dim / 3;
    require(std::abs(g3.step - g3.freq_step()) <= 1e-12 * g3.step, ErrorCode::bad_argument,
            "amplitude norms require a self-dual grid");

    PhaseSpaceArray V = gabor_coefficients(a, GaborSystem(g3, a_step, b_step, phi3));
    const int mx = V.nx();
    const int mk = V.nk();
    require((g3.n / 2) % a_step == 0, ErrorCode::bad_argument,
            "spatial stride must divide N/2 for the sheared norm");

    std::size_t total = V.values.size();
    require(total <= (1u << 25), ErrorCode::bad_argument, "coefficient tensor exceeds the memory guard");

    // weight at the unsheared coefficient coordinates
    if (!omega.is_trivial()) {
        const int rank = 6 * d;
        std::vector<int> idx(rank, 0);
        std::vector<double> pt(rank);
        std::vector<std::vector<double>> coords(rank);
        for (int axis = 0; axis < 3 * d; ++axis) {
            coords[axis].resize(mx);
            for (int j = 0; j < mx; ++j) coords[axis][j] = V.x_coord(j);
            coords[3 * d + axis].resize(mk);
            for (int k = 0; k < mk; ++k) coords[3 * d + axis][k] = V.xi_coord(k);
        }
        for (int axis = 0; axis < rank; ++axis) pt[axis] = coords[axis][0];
        std::vector<int> shp(rank);
        for (int axis = 0; axis < 3 * d; ++axis) {
            shp[axis] = mx;
            shp[3 * d + axis] = mk;
        }
        for (std::size_t i = 0; i < total; ++i) {
            V.values[i] *= omega.eval(pt);
            for (int axis = rank - 1; axis >= 0; --axis) {
                if (++idx[axis] < shp[axis]) {
                    pt[axis] = coords[axis][idx[axis]];
                    break;
                }
                idx[axis] = 0;
                pt[axis] = coords[axis][0];
            }
        }
    }

    // shear the y slot: G(x, y, ...) = (V omega)(x, x + y, ...)
    {
        const int M = mx;
        std::vector<int> shape6;
        for (int a3 = 0; a3 < 3 * d; ++a3) shape6.push_back(mx);
        for (int a3 = 0; a3 < 3 * d; ++a3) shape6.push_back(mk);
        std::vector<Complex> out(total);
        std::vector<int> idx(6 * d), src(6 * d);
        const int off = (g3.n / 2) / a_step;
        for (std::size_t i = 0; i < total; ++i) {
            std::size_t r = i;
            for (int a3 = 6 * d - 1; a3 >= 0; --a3) {
                idx[a3] = static_cast<int>(r % shape6[a3]);
                r /= shape6[a3];
            }
            for (int a3 = 0; a3 < 6 * d; ++a3) src[a3] = idx[a3];
            for (int a3 = 0; a3 < d; ++a3) {
                int s = (idx[a3] + idx[d + a3] - off) % M;
                src[d + a3] = s < 0 ? s + M : s;
            }
            std::size_t flat = 0;
            for (int a3 = 0; a3 < 6 * d; ++a3)
                flat = flat * static_cast<std::size_t>(shape6[a3]) + static_cast<std::size_t>(src[a3]);
            out[i] = V.values[flat];
        }
        V.values.swap(out);
    }

    // mixed quasi-norm with per-block cells; weight already applied
    std::vector<double> exponents;
    MixedNormSpec spec;
    const int rank = 6 * d;
    spec.permutation.resize(rank);
    if (flavor == ModulationFlavor::M) {
        for (int blk = 0; blk < 3; ++blk)
            for (int a3 = 0; a3 < d; ++a3) exponents.push_back(p[blk]);
        for (int blk = 0; blk < 3; ++blk)
            for (int a3 = 0; a3 < d; ++a3) exponents.push_back(q[blk]);
        for (int a3 = 0; a3 < rank; ++a3) spec.permutation[a3] = a3;
    } else {
        for (int blk = 0; blk < 3; ++blk)
            for (int a3 = 0; a3 < d; ++a3) exponents.push_back(q[blk]);
        for (int blk = 0; blk < 3; ++blk)
            for (int a3 = 0; a3 < d; ++a3) exponents.push_back(p[blk]);
        for (int a3 = 0; a3 < 3 * d; ++a3) {
            spec.permutation[a3] = a3 + 3 * d;
            spec.permutation[a3 + 3 * d] = a3;
        }
    }
    spec.exponents = std::move(exponents);
    spec.cell.assign(rank, 1.0);
    for (int a3 = 0; a3 < 3 * d; ++a3) {
        spec.cell[a3] = a_step * g3.step;
        spec.cell[3 * d + a3] = b_step * g3.freq_step();
    }

    std::vector<int> shape(rank);
    std::vector<std::vector<double>> coords(rank);
    for (int a3 = 0; a3 < 3 * d; ++a3) {
        shape[a3] = mx;
        shape[3 * d + a3] = mk;
        coords[a3].assign(static_cast<std::size_t>(mx), 0.0);
        coords[3 * d + a3].assign(static_cast<std::size_t>(mk), 0.0);
        for (int j = 0; j < mx; ++j) coords[a3][j] = V.x_coord(j);
        for (int k = 0; k < mk; ++k) coords[3 * d + a3][k] = V.xi_coord(k);
    }
    return mixed_quasi_norm(V.values, shape, coords, spec);
}

namespace {

SampledField seeded_symbol(const GridSpec& g2, std::uint64_t seed) {
    Rng rng(seed);
    const int atoms = 5;
    const int dim = g2.dim;
    std::vector<std::vector<double>> ctr(atoms, std::vector<double>(dim));
    std::vector<std::vector<double>> frq(atoms, std::vector<double>(dim));
    std::vector<Complex> amp(atoms);
    for (int j = 0; j < atoms; ++j) {
        for (int a = 0; a < dim; ++a) {
            ctr[j][a] = rng.uniform(-1.5, 1.5);
            frq[j][a] = rng.uniform(-1.5, 1.5);
        }
        amp[j] = rng.complex_normal();
    }
    SampledField f(g2);
    std::vector<int> idx(dim);
    std::vector<double> x(dim);
    const GridSpec dual = g2.dual();
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        unflatten(i, dim, g2.n, idx);
        for (int a = 0; a < dim / 2; ++a) x[a] = g2.coord(idx[a]);
        for (int a = dim / 2; a < dim; ++a) x[a] = dual.coord(idx[a]);
        Complex v(0, 0);
        for (int j = 0; j < atoms; ++j) {
            double q2 = 0.0, ph = 0.0;
            for (int a = 0; a < dim; ++a) {
                double dx = x[a] - ctr[j][a];
                q2 += dx * dx;
                ph += x[a] * frq[j][a];
            }
            v += amp[j] * std::exp(-0.5 * q2) * std::polar(1.0, ph);
        }
        f.values[i] = v;
    }
    return f;
}

SampledField seeded_test_function(const GridSpec& g, std::uint64_t seed) {
    Rng rng(seed);
    const int atoms = 6;
    SampledField f(g);
    std::vector<std::vector<double>> ctr(atoms, std::vector<double>(g.dim));
    std::vector<std::vector<double>> frq(atoms, std::vector<double>(g.dim));
    std::vector<Complex> amp(atoms);
    for (int j = 0; j < atoms; ++j) {
        for (int a = 0; a < g.dim; ++a) {
            ctr[j][a] = rng.uniform(-1.5, 1.5);
            frq[j][a] = rng.uniform(-1.5, 1.5);
        }
        amp[j] = rng.complex_normal();
    }
    std::vector<int> idx(g.dim);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        unflatten(i, g.dim, g.n, idx);
        Complex v(0, 0);
        for (int j = 0; j < atoms; ++j) {
            double q2 = 0.0, ph = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                double x = g.coord(idx[a]);
                double dx = x - ctr[j][a];
                q2 += dx * dx;
                ph += x * frq[j][a];
            }
            v += amp[j] * std::exp(-0.5 * q2) * std::polar(1.0, ph);
        }
        f.values[i] = v;
    }
    return f;
}

double continuity_r_at(const ContinuityConfig& config, int n, double* amp_norm_out, int threads) {
    GridSpec g = self_dual_grid(1, n);
    GridSpec g2 = self_dual_grid(2, n);
    GridSpec g3 = self_dual_grid(3, n);

    SampledField a0 = seeded_symbol(g2, config.seed);
    SampledField a = extend_symbol(a0, gaussian_peak_field(g));

    Window phi3 = gaussian_window(g3);
    double amp_norm = amplitude_mod_norm(a, phi3, {config.p, inf_exponent, config.p},
                                         {config.q, config.q, config.q}, config.omega, ModulationFlavor::M);
    if (amp_norm_out) *amp_norm_out = amp_norm;
    if (amp_norm == 0.0) return 0.0;

    OperatorMatrix op = op_from_amplitude(a);
    Window phi = gaussian_window(g);

    std::vector<double> ratios(config.family, 0.0);
    parallel_for(static_cast<std::size_t>(config.family), threads, [&](std::size_t m) {
        SampledField f = seeded_test_function(g, config.seed + 1000 + m);
        double denom = modulation_norm(f, phi, config.p1, config.q1, config.omega1, ModulationFlavor::M);
        Eigen::Map<const CVector> fv(f.values.data(), static_cast<Eigen::Index>(f.values.size()));
        CVector gv = op.m * fv;
        SampledField opf(g);
        for (std::size_t i = 0; i < opf.values.size(); ++i) opf.values[i] = gv(static_cast<Eigen::Index>(i));
        double numer = modulation_norm(opf, phi, config.p2, config.q2, config.omega2, ModulationFlavor::M);
        ratios[m] = denom > 0.0 ? numer / (amp_norm * denom) : 0.0;
    });
    double mx = 0.0;
    for (double r : ratios) mx = std::max(mx, r);
    return mx;
}

} // namespace

ContinuityReport continuity_experiment(const ContinuityConfig& config, int threads) {
    ContinuityReport rep;

    // weight sweep for the continuity condition; with the default trivial
    // weights the ratio is identically one.
    {
        Rng rng(11);
        double mx = 0.0;
        std::vector<double> x2(2), z2(2), w6(6);
        for (int t = 0; t < 4096; ++t) {
            for (double& v : x2) v = rng.uniform(-5.0, 5.0);
            for (double& v : z2) v = rng.uniform(-5.0, 5.0);
            w6[0] = x2[0];
            w6[1] = z2[0];
            w6[2] = z2[1] + rng.uniform(-5.0, 5.0);
            w6[3] = x2[1] - w6[2];
            w6[4] = w6[2];
            w6[5] = z2[0] - x2[0];
            double lr = config.omega2.log_eval(x2) - config.omega1.log_eval(z2) - config.omega.log_eval(w6);
            mx = std::max(mx, lr);
        }
        rep.weight_sweep_max = std::exp(mx);
    }

    rep.r_coarse = continuity_r_at(config, config.n_coarse, &rep.amplitude_norm_coarse, threads);
    rep.r_fine = continuity_r_at(config, config.n_fine, &rep.amplitude_norm_fine, threads);
    rep.degenerate = rep.amplitude_norm_fine == 0.0;
    rep.growth = rep.r_coarse > 0.0 ? rep.r_fine / rep.r_coarse : 0.0;
    return rep;
}

} // namespace modspace
