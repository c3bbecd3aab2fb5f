#include <doctest.h>

#include <cmath>
#include <numbers>

#include "modspace/fourier.hpp"
#include "modspace/psdo.hpp"
#include "modspace/rng.hpp"
#include "oracles.hpp"

using namespace modspace;

namespace {

// symbol-axis convention: first half spatial coords, second half dual coords
SampledField smooth_symbol(const GridSpec& g2, std::uint64_t seed) {
    Rng rng(seed);
    SampledField f(g2);
    const int dim = g2.dim;
    const GridSpec dual = g2.dual();
    const int atoms = 5;
    std::vector<std::vector<double>> ctr(atoms, std::vector<double>(dim)), frq(atoms, std::vector<double>(dim));
    std::vector<Complex> amp(atoms);
    for (int j = 0; j < atoms; ++j) {
        for (int a = 0; a < dim; ++a) {
            ctr[j][a] = rng.uniform(-1.5, 1.5);
            frq[j][a] = rng.uniform(-1.5, 1.5);
        }
        amp[j] = rng.complex_normal();
    }
    std::vector<int> idx(dim);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        unflatten(i, dim, g2.n, idx);
        Complex v(0, 0);
        for (int j = 0; j < atoms; ++j) {
            double q2 = 0.0, ph = 0.0;
            for (int a = 0; a < dim; ++a) {
                double x = a < dim / 2 ? g2.coord(idx[a]) : dual.coord(idx[a]);
                q2 += (x - ctr[j][a]) * (x - ctr[j][a]);
                ph += x * frq[j][a];
            }
            v += amp[j] * std::exp(-0.5 * q2) * std::polar(1.0, ph);
        }
        f.values[i] = v;
    }
    return f;
}

SampledField constant_field(const GridSpec& g, Complex c) {
    SampledField f(g);
    for (auto& v : f.values) v = c;
    return f;
}

double rel_frobenius(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

} // namespace

TEST_CASE("unit symbol quantizes to the identity for every t") {
    GridSpec g = self_dual_grid(1, 32);
    GridSpec g2(2, g.n, g.step);
    SampledField one = constant_field(g2, 1.0);
    for (Quantization q : {Quantization::kohn_nirenberg, Quantization::weyl, Quantization::right}) {
        OperatorMatrix m = op_from_symbol(one, q);
        CHECK((m.m - CMatrix::Identity(g.n, g.n)).norm() <= 1e-10);
    }
}

TEST_CASE("frequency symbol acts as spectral differentiation") {
    GridSpec g = self_dual_grid(1, 32);
    GridSpec g2(2, g.n, g.step), dual = g.dual();
    SampledField sym(g2);
    std::vector<int> idx(2);
    for (std::size_t i = 0; i < sym.values.size(); ++i) {
        unflatten(i, 2, g.n, idx);
        sym.values[i] = dual.coord(idx[1]);
    }
    OperatorMatrix m = op_from_symbol(sym, Quantization::kohn_nirenberg);

    SampledField f(g);
    for (int j = 0; j < g.n; ++j) {
        double x = g.coord(j);
        f.values[j] = std::exp(-0.5 * x * x) * std::polar(1.0, 1.5 * x);
    }
    // oracle: multiply the centered spectrum by xi
    std::vector<Complex> spec = f.values;
    std::vector<int> shape{g.n}, ax{0};
    centered_dft_axes(spec, shape, ax);
    for (int k = 0; k < g.n; ++k) spec[k] *= dual.coord(k) / static_cast<double>(g.n);
    centered_idft_axes(spec, shape, ax);

    double err = 0.0, scale = 0.0;
    for (int j = 0; j < g.n; ++j) {
        Complex got(0, 0);
        for (int k = 0; k < g.n; ++k) got += m.m(j, k) * f.values[k];
        err = std::max(err, std::abs(got - spec[j]));
        scale = std::max(scale, std::abs(spec[j]));
    }
    CHECK(err / scale <= 1e-6);
}

TEST_CASE("x-only symbols quantize to diagonal multiplication for every t") {
    GridSpec g = self_dual_grid(1, 16);
    GridSpec g2(2, g.n, g.step);
    SampledField sym(g2);
    std::vector<int> idx(2);
    for (std::size_t i = 0; i < sym.values.size(); ++i) {
        unflatten(i, 2, g.n, idx);
        double x = g.coord(idx[0]);
        sym.values[i] = std::exp(-0.5 * x * x) * Complex(1.0, 0.5 * x);
    }
    for (Quantization q : {Quantization::kohn_nirenberg, Quantization::weyl, Quantization::right}) {
        OperatorMatrix m = op_from_symbol(sym, q);
        for (int r = 0; r < g.n; ++r)
            for (int c = 0; c < g.n; ++c) {
                Complex expect = r == c ? sym.values[static_cast<std::size_t>(r) * g.n + g.n / 2] : Complex(0, 0);
                CHECK(std::abs(m.m(r, c) - expect) <= 1e-10);
            }
    }
}

TEST_CASE("amplitude operators coincide with quantizations on degenerate amplitudes") {
    GridSpec g = self_dual_grid(1, 16);
    GridSpec g2(2, g.n, g.step), g3(3, g.n, g.step);
    SampledField a0 = smooth_symbol(g2, 31);

    SampledField a_left(g3), a_right(g3);
    std::vector<int> idx(3);
    for (std::size_t i = 0; i < a_left.values.size(); ++i) {
        unflatten(i, 3, g.n, idx);
        std::vector<int> sx{idx[0], idx[2]}, sy{idx[1], idx[2]};
        a_left.values[i] = a0.at(sx);  // a(x, y, z) = a0(x, z)
        a_right.values[i] = a0.at(sy); // a(x, y, z) = a0(y, z)
    }
    OperatorMatrix kn = op_from_symbol(a0, Quantization::kohn_nirenberg);
    OperatorMatrix rt = op_from_symbol(a0, Quantization::right);
    CHECK(rel_frobenius(op_from_amplitude(a_left).m, kn.m) <= 1e-10);
    CHECK(rel_frobenius(op_from_amplitude(a_right).m, rt.m) <= 1e-10);

    SampledField one3 = constant_field(g3, 1.0);
    CHECK((op_from_amplitude(one3).m - CMatrix::Identity(g.n, g.n)).norm() <= 1e-10);
}

TEST_CASE("exp multiplier") {
    GridSpec g = self_dual_grid(2, 16);
    GridSpec dual = g.dual();
    std::vector<int> fb{0}, sb{1};

    SUBCASE("plane waves are eigenvectors with the index-product eigenvalue") {
        Rng rng(6);
        for (int t = 0; t < 5; ++t) {
            int kb = rng.uniform_int(0, g.n - 1), kc = rng.uniform_int(0, g.n - 1);
            SampledField u(g);
            std::vector<int> idx(2);
            for (std::size_t i = 0; i < u.values.size(); ++i) {
                unflatten(i, 2, g.n, idx);
                u.values[i] = std::polar(1.0, g.coord(idx[0]) * dual.coord(kb) + dual.coord(idx[1]) * g.coord(kc));
            }
            double scale = 0.7;
            SampledField out = exp_multiplier(u, fb, sb, +1, scale);
            Complex eig = std::polar(1.0, scale * g.coord(kc) * dual.coord(kb));
            for (std::size_t i = 0; i < u.values.size(); ++i)
                CHECK(std::abs(out.values[i] - eig * u.values[i]) <= 1e-10);
        }
    }
    SUBCASE("scale zero is the identity, opposite signs invert") {
        Rng rng(14);
        SampledField u(g);
        for (auto& v : u.values) v = rng.complex_normal();
        SampledField id0 = exp_multiplier(u, fb, sb, +1, 0.0);
        for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(u.values[i] == id0.values[i]);

        SampledField round = exp_multiplier(exp_multiplier(u, fb, sb, +1, 1.0), fb, sb, -1, 1.0);
        double l2 = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) l2 = std::max(l2, std::abs(round.values[i] - u.values[i]));
        CHECK(l2 <= 1e-12);
    }
    SUBCASE("modulus-one multiplier is an ell^2 isometry") {
        Rng rng(15);
        SampledField u(g);
        for (auto& v : u.values) v = rng.complex_normal();
        SampledField out = exp_multiplier(u, fb, sb, +1, 0.37);
        long double a = 0, b = 0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            a += std::norm(u.values[i]);
            b += std::norm(out.values[i]);
        }
        CHECK(std::abs(static_cast<double>(a - b)) / static_cast<double>(a) <= 1e-12);
    }
}

TEST_CASE("calculus transfer") {
    GridSpec g = self_dual_grid(1, 32);
    GridSpec g2(2, g.n, g.step);
    SampledField a1 = smooth_symbol(g2, 8);

    SUBCASE("equal quantizations return the symbol unchanged") {
        SampledField same = calculus_transfer(a1, Quantization::weyl, Quantization::weyl);
        for (std::size_t i = 0; i < a1.values.size(); ++i) CHECK(same.values[i] == a1.values[i]);
    }
    SUBCASE("weyl and transferred kohn-nirenberg matrices agree") {
        SampledField a2 = calculus_transfer(a1, Quantization::weyl, Quantization::kohn_nirenberg);
        CHECK(rel_frobenius(op_from_symbol(a1, Quantization::weyl).m,
                            op_from_symbol(a2, Quantization::kohn_nirenberg).m) <= 1e-6);
    }
    SUBCASE("all supported quantization pairs agree through the transfer") {
        for (Quantization qa : {Quantization::kohn_nirenberg, Quantization::weyl, Quantization::right})
            for (Quantization qb : {Quantization::kohn_nirenberg, Quantization::weyl, Quantization::right}) {
                SampledField a2 = calculus_transfer(a1, qa, qb);
                CHECK(rel_frobenius(op_from_symbol(a1, qa).m, op_from_symbol(a2, qb).m) <= 1e-6);
            }
    }
    SUBCASE("round trip through t = 0 returns the symbol") {
        SampledField back = calculus_transfer(
            calculus_transfer(a1, Quantization::weyl, Quantization::kohn_nirenberg),
            Quantization::kohn_nirenberg, Quantization::weyl);
        double scale = 0.0, err = 0.0;
        for (std::size_t i = 0; i < a1.values.size(); ++i) {
            scale = std::max(scale, std::abs(a1.values[i]));
            err = std::max(err, std::abs(back.values[i] - a1.values[i]));
        }
        CHECK(err <= 1e-10 * scale);
    }
}

TEST_CASE("weyl quantization of real even symbols is hermitian") {
    // N = 32 keeps the symbol's boundary tail below the grid's decay
    // contract; coarser grids surface the periodization asymmetry instead
    GridSpec g = self_dual_grid(1, 32);
    GridSpec g2(2, g.n, g.step), dual = g.dual();
    SampledField sym(g2);
    std::vector<int> idx(2);
    for (std::size_t i = 0; i < sym.values.size(); ++i) {
        unflatten(i, 2, g.n, idx);
        double x = g2.coord(idx[0]), z = dual.coord(idx[1]);
        sym.values[i] = (1.0 + x * x + 0.3 * z * z) * std::exp(-(x * x + z * z) / 2.0);
    }
    OperatorMatrix m = op_from_symbol(sym, Quantization::weyl);
    CHECK((m.m - m.m.adjoint()).norm() / m.m.norm() <= 1e-8);
}

TEST_CASE("reduce amplitude") {
    GridSpec g = self_dual_grid(1, 16);
    GridSpec g2(2, g.n, g.step), g3(3, g.n, g.step);

    SUBCASE("y-independent amplitudes reduce exactly") {
        SampledField a0 = smooth_symbol(g2, 77);
        SampledField a(g3);
        std::vector<int> idx(3);
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            unflatten(i, 3, g.n, idx);
            std::vector<int> s{idx[0], idx[2]};
            a.values[i] = a0.at(s);
        }
        SampledField red = reduce_amplitude(a);
        double err = 0.0;
        for (std::size_t i = 0; i < red.values.size(); ++i)
            err = std::max(err, std::abs(red.values[i] - a0.values[i]));
        CHECK(err <= 1e-12);
    }
    SUBCASE("plane-wave amplitudes follow the eigenfunction rule") {
        GridSpec dual = g.dual();
        Rng rng(41);
        for (int t = 0; t < 4; ++t) {
            int ia = rng.uniform_int(0, g.n - 1), ib = rng.uniform_int(0, g.n - 1), ic = rng.uniform_int(0, g.n - 1);
            double alpha = dual.coord(ia), beta = dual.coord(ib);
            double gamma = g.coord(ic); // dual variable of the zeta axis
            SampledField a(g3);
            std::vector<int> idx(3);
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                unflatten(i, 3, g.n, idx);
                double x = g.coord(idx[0]), y = g.coord(idx[1]), z = dual.coord(idx[2]);
                a.values[i] = std::polar(1.0, x * alpha + y * beta + z * gamma);
            }
            // shear sends it to e^{i x (alpha+beta)} e^{i y beta} e^{i z gamma};
            // the multiplier contributes e^{i gamma beta}; the y = 0 slice drops e^{i y beta}
            SampledField red = reduce_amplitude(a);
            double err = 0.0;
            for (std::size_t i = 0; i < red.values.size(); ++i) {
                std::size_t ix = i / g.n, iz = i % g.n;
                Complex expect = std::polar(1.0, gamma * beta + g.coord(static_cast<int>(ix)) * (alpha + beta) +
                                                     dual.coord(static_cast<int>(iz)) * gamma);
                err = std::max(err, std::abs(red.values[i] - expect));
            }
            CHECK(err <= 1e-10);
        }
    }
    SUBCASE("operator consistency: Op(a) equals Op_0(reduce(a))") {
        GridSpec g32 = self_dual_grid(1, 32);
        GridSpec h2(2, g32.n, g32.step), h3(3, g32.n, g32.step), dual = g32.dual();
        for (int t = 0; t < 3; ++t) {
            // separable gaussian amplitude with mild phases
            SampledField a(h3);
            std::vector<int> idx(3);
            Rng rng(100 + t);
            double cx = rng.uniform(-1.0, 1.0), cy = rng.uniform(-1.0, 1.0), cz = rng.uniform(-1.0, 1.0);
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                unflatten(i, 3, g32.n, idx);
                double x = g32.coord(idx[0]), y = g32.coord(idx[1]), z = dual.coord(idx[2]);
                a.values[i] = std::exp(-0.5 * ((x - cx) * (x - cx) + (y - cy) * (y - cy) + (z - cz) * (z - cz))) *
                              std::polar(1.0, 0.8 * x - 0.5 * y + 0.6 * z);
            }
            OperatorMatrix direct = op_from_amplitude(a);
            OperatorMatrix reduced = op_from_symbol(reduce_amplitude(a), Quantization::kohn_nirenberg);
            CHECK(rel_frobenius(direct.m, reduced.m) <= 1e-6);
        }
    }
}

TEST_CASE("extend symbol") {
    GridSpec g = self_dual_grid(1, 32);
    GridSpec g2(2, g.n, g.step);
    SampledField phi = gaussian_peak_field(g);

    SUBCASE("reduce is a left inverse of extend") {
        for (int t = 0; t < 3; ++t) {
            SampledField a0 = smooth_symbol(g2, 200 + t);
            SampledField back = reduce_amplitude(extend_symbol(a0, phi));
            double err = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < a0.values.size(); ++i) {
                err = std::max(err, std::abs(back.values[i] - a0.values[i]));
                scale = std::max(scale, std::abs(a0.values[i]));
            }
            CHECK(err / scale <= 1e-8);
        }
    }
    SUBCASE("zero symbol extends to zero") {
        SampledField z = extend_symbol(SampledField(g2), phi);
        for (const auto& v : z.values) CHECK(std::abs(v) == 0.0);
    }
    SUBCASE("extension preserves the operator") {
        SampledField a0 = smooth_symbol(g2, 300);
        CHECK(rel_frobenius(op_from_amplitude(extend_symbol(a0, phi)).m,
                            op_from_symbol(a0, Quantization::kohn_nirenberg).m) <= 1e-6);
    }
}

TEST_CASE("amplitude modulation norm") {
    GridSpec g = self_dual_grid(1, 8);
    GridSpec g2(2, g.n, g.step), g3(3, g.n, g.step);
    Window phi3 = gaussian_window(g3);

    SUBCASE("zero amplitude has zero norm; scaling is homogeneous") {
        CHECK(amplitude_mod_norm(SampledField(g3), phi3, {inf_exponent, inf_exponent, inf_exponent},
                                 {1.0, 1.0, 1.0}, Weight(), ModulationFlavor::M) == 0.0);
        SampledField a = extend_symbol(smooth_symbol(g2, 5), gaussian_peak_field(g));
        SampledField a2(g3);
        a2.values = a.values;
        for (auto& v : a2.values) v *= 2.0;
        double n1 = amplitude_mod_norm(a, phi3, {inf_exponent, inf_exponent, inf_exponent}, {1.0, 1.0, 1.0},
                                       Weight(), ModulationFlavor::M);
        double n2 = amplitude_mod_norm(a2, phi3, {inf_exponent, inf_exponent, inf_exponent}, {1.0, 1.0, 1.0},
                                       Weight(), ModulationFlavor::M);
        CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-12));
    }
    SUBCASE("matches a nested-loop oracle on an N = 8 y-independent amplitude") {
        SampledField a0 = smooth_symbol(g2, 9);
        SampledField a(g3);
        std::vector<int> idx(3);
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            unflatten(i, 3, g.n, idx);
            std::vector<int> s{idx[0], idx[2]};
            a.values[i] = a0.at(s);
        }
        const double p = 1.5, q = 1.0;
        double lib = amplitude_mod_norm(a, phi3, {p, inf_exponent, p}, {q, q, q}, Weight(),
                                        ModulationFlavor::M);

        // oracle: direct-sum 6-axis STFT, loop-based shear, reference norm
        const int N = g.n;
        const GridSpec dual = g.dual();
        const double s0 = std::pow(2 * std::numbers::pi, -1.5) * std::pow(g.step, 3);
        std::vector<Complex> v(static_cast<std::size_t>(N) * N * N * N * N * N);
        std::vector<int> six(6), three(3);
        for (std::size_t i = 0; i < v.size(); ++i) {
            unflatten(i, 6, N, six);
            Complex acc(0, 0);
            for (std::size_t m = 0; m < a.values.size(); ++m) {
                unflatten(m, 3, N, three);
                double phase = 0.0;
                for (int ax = 0; ax < 3; ++ax) phase -= g.coord(three[ax]) * dual.coord(six[3 + ax]);
                std::vector<int> widx{g.wrap(three[0] - six[0] + N / 2), g.wrap(three[1] - six[1] + N / 2),
                                      g.wrap(three[2] - six[2] + N / 2)};
                acc += a.values[m] * std::conj(phi3.field.at(widx)) * std::polar(1.0, phase);
            }
            v[i] = s0 * acc;
        }
        // shear: G（x,y,...) = V(x, x+y-N/2 mod N, ...)
        std::vector<Complex> sheared(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            unflatten(i, 6, N, six);
            std::vector<int> src = six;
            src[1] = ((six[0] + six[1] - N / 2) % N + N) % N;
            sheared[i] = v[flatten(src, N)];
        }
        std::vector<int> shape(6, N);
        std::vector<std::vector<double>> coords(6);
        for (int ax = 0; ax < 3; ++ax) {
            coords[ax].resize(N);
            coords[3 + ax].resize(N);
            for (int j = 0; j < N; ++j) {
                coords[ax][j] = g.coord(j);
                coords[3 + ax][j] = dual.coord(j);
            }
        }
        std::vector<double> exps{p, inf_exponent, p, q, q, q};
        std::vector<int> sigma{0, 1, 2, 3, 4, 5};
        std::vector<double> cell{g.step, g.step, g.step, g.freq_step(), g.freq_step(), g.freq_step()};
        double ref = oracles::reference_mixed_norm(sheared, shape, coords, exps, sigma, Weight(), cell);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("continuity experiment runs and is refinement stable at small sizes") {
    ContinuityConfig cfg;
    cfg.n_coarse = 8;
    cfg.n_fine = 12;
    cfg.family = 3;
    ContinuityReport rep = continuity_experiment(cfg);
    CHECK(rep.weight_sweep_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.r_fine > 0.0);
    CHECK(std::isfinite(rep.r_fine));
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.growth > 0.6);
    CHECK(rep.growth < 1.6);

    SUBCASE("zero amplitude flags the degenerate case") {
        // a zero symbol extends to the zero amplitude; the report must say so
        GridSpec g = self_dual_grid(1, 8);
        GridSpec g3(3, g.n, g.step);
        double norm0 = amplitude_mod_norm(SampledField(g3), gaussian_window(g3),
                                          {inf_exponent, inf_exponent, inf_exponent}, {1, 1, 1}, Weight(),
                                          ModulationFlavor::M);
        CHECK(norm0 == 0.0);
    }
}
