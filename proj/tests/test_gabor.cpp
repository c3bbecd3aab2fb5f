#include <doctest.h>

#include <cmath>
#include <numbers>

#include "modspace/gabor.hpp"
#include "modspace/rng.hpp"
#include "oracles.hpp"

using namespace modspace;

namespace {

SampledField random_gaussian_decay_field(const GridSpec& g, Rng& rng) {
    SampledField f(g);
    std::vector<int> idx(g.dim);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        unflatten(i, g.dim, g.n, idx);
        double n2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double x = g.coord(idx[a]);
            n2 += x * x;
        }
        f.values[i] = rng.complex_normal() * std::exp(-n2 / 4.0);
    }
    return f;
}

} // namespace

TEST_CASE("gaussian self-STFT matches quadrature oracle and analytic magnitude") {
    GridSpec g = self_dual_grid(1, 32);
    Window phi = gaussian_window(g);
    PhaseSpaceArray v = stft(phi.field, phi);
    GridSpec dual = g.dual();

    auto window_fn = [](double x) { return Complex(std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x), 0.0); };
    const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);

    for (int n = 0; n < g.n; ++n)
        for (int k = 0; k < g.n; ++k) {
            double x = g.coord(n), xi = dual.coord(k);
            if (std::abs(x) > 3.0 || std::abs(xi) > 3.0) continue;
            Complex lib = v.values[static_cast<std::size_t>(n) * g.n + k];
            Complex ora = oracles::direct_stft_point(phi.field.values, g, window_fn, x, xi);
            CHECK(std::abs(lib - ora) / std::abs(ora) < 1e-6);
            double analytic = c * std::exp(-(x * x + xi * xi) / 4.0);
            CHECK(std::abs(std::abs(lib) - analytic) / analytic < 1e-6);
        }
}

TEST_CASE("stft of zero is zero and grids must match") {
    GridSpec g = self_dual_grid(1, 16);
    Window phi = gaussian_window(g);
    PhaseSpaceArray v = stft(SampledField(g), phi);
    for (const Complex& c : v.values) CHECK(std::abs(c) == 0.0);
    CHECK_THROWS_AS(stft(SampledField(self_dual_grid(1, 32)), phi), Error);
}

TEST_CASE("stft magnitude is covariant under grid translations") {
    GridSpec g = self_dual_grid(1, 16);
    Window phi = gaussian_window(g);
    Rng rng(8);
    SampledField f = random_gaussian_decay_field(g, rng);

    SampledField tf(g); // translate by one grid step
    for (int m = 0; m < g.n; ++m) tf.values[m] = f.values[g.wrap(m - 1)];

    PhaseSpaceArray vf = stft(f, phi);
    PhaseSpaceArray vt = stft(tf, phi);
    for (int n = 0; n < g.n; ++n)
        for (int k = 0; k < g.n; ++k) {
            double shifted = std::abs(vf.values[static_cast<std::size_t>(g.wrap(n - 1)) * g.n + k]);
            CHECK(std::abs(vt.values[static_cast<std::size_t>(n) * g.n + k]) ==
                  doctest::Approx(shifted).epsilon(1e-10));
        }
}

TEST_CASE("gabor coefficients restrict the full stft to the sub-lattice") {
    GridSpec g = self_dual_grid(1, 16);
    Window phi = gaussian_window(g);
    Rng rng(3);
    SampledField f = random_gaussian_decay_field(g, rng);

    GaborSystem sys(g, 2, 2, phi);
    PhaseSpaceArray coarse = gabor_coefficients(f, sys);
    PhaseSpaceArray full = stft(f, phi);
    CHECK(coarse.nx() == 8);
    CHECK(coarse.nk() == 8);

    GridSpec dual = g.dual();
    const double s0 = std::pow(2 * std::numbers::pi, -0.5) * g.step;
    for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k) {
            Complex lib = coarse.values[static_cast<std::size_t>(j) * 8 + k];
            CHECK(std::abs(lib - full.values[static_cast<std::size_t>(2 * j) * g.n + 2 * k]) < 1e-12);
            // direct-sum oracle on the sub-lattice point: window centered at
            // x = coord(2j)
            Complex acc(0, 0);
            for (int m = 0; m < g.n; ++m)
                acc += f.values[m] * std::conj(phi.field.values[g.wrap(m - 2 * j + g.n / 2)]) *
                       std::polar(1.0, -g.coord(m) * dual.coord(2 * k));
            CHECK(std::abs(lib - s0 * acc) < 1e-10);
        }

    GaborSystem sys11(g, 1, 1, phi);
    PhaseSpaceArray ident = gabor_coefficients(f, sys11);
    for (std::size_t i = 0; i < ident.values.size(); ++i)
        CHECK(std::abs(ident.values[i] - full.values[i]) == 0.0);
}

TEST_CASE("full-lattice gaussian frame is tight and the dual is parallel to the window") {
    GridSpec g = self_dual_grid(1, 16);
    GaborSystem sys(g, 1, 1, gaussian_window(g));
    CMatrix s = frame_operator(sys);

    // S should be (sum |phi|^2) N times the identity
    double diag = s(0, 0).real();
    for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j) {
            double expect = i == j ? diag : 0.0;
            CHECK(std::abs(s(i, j) - Complex(expect, 0)) < 1e-9 * diag);
        }

    compute_dual_window(sys);
    CHECK(sys.frame_upper / sys.frame_lower < 1.0 + 1e-9);
    // dual proportional to the window
    const auto& gam = sys.dual->field.values;
    const auto& phi = sys.window.field.values;
    Complex ratio = gam[8] / phi[8];
    for (int m = 0; m < g.n; ++m)
        CHECK(std::abs(gam[m] - ratio * phi[m]) <= 1e-6 * std::abs(ratio));
}

TEST_CASE("too sparse lattices are rejected") {
    GridSpec g = self_dual_grid(1, 16);
    GaborSystem sys(g, 8, 4, gaussian_window(g)); // a b = 32 > 16
    CHECK_THROWS_AS(frame_operator(sys), Error);
    CHECK_THROWS_AS(compute_dual_window(sys), Error);
}

TEST_CASE("frame round trip at N = 48, strides (4,4)") {
    GridSpec g = self_dual_grid(1, 48);
    GaborSystem sys(g, 4, 4, gaussian_window(g));
    compute_dual_window(sys);

    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        SampledField f(g);
        for (auto& c : f.values) c = rng.complex_normal();
        SampledField rec = gabor_synthesis(gabor_coefficients(f, sys), *sys.dual);
        double num = 0.0, den = 0.0;
        for (int m = 0; m < g.n; ++m) {
            num += std::norm(rec.values[m] - f.values[m]);
            den += std::norm(f.values[m]);
        }
        CHECK(std::sqrt(num / den) <= 1e-8);
    }
}

TEST_CASE("synthesis of a single unit coefficient and linearity") {
    GridSpec g = self_dual_grid(1, 16);
    Window psi = gaussian_window(g);

    PhaseSpaceArray c;
    c.grid = g;
    c.a_step = c.b_step = 1;
    c.values.assign(g.n * static_cast<std::size_t>(g.n), Complex(0, 0));
    // unit coefficient at (x, xi) = (0, 0): spatial index N/2, frequency index N/2
    c.values[static_cast<std::size_t>(8) * g.n + 8] = 1.0;
    SampledField f = gabor_synthesis(c, psi);
    const double nc = std::sqrt(2 * std::numbers::pi) / g.step;
    for (int m = 0; m < g.n; ++m)
        CHECK(std::abs(f.values[m] - nc * psi.field.values[m]) < 1e-12 * nc);

    Rng rng(5);
    PhaseSpaceArray c1 = c, c2 = c, csum = c;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        c1.values[i] = rng.complex_normal();
        c2.values[i] = rng.complex_normal();
        csum.values[i] = c1.values[i] + c2.values[i];
    }
    SampledField f1 = gabor_synthesis(c1, psi);
    SampledField f2 = gabor_synthesis(c2, psi);
    SampledField fs = gabor_synthesis(csum, psi);
    double scale = 0.0;
    for (int m = 0; m < g.n; ++m) scale = std::max(scale, std::abs(fs.values[m]));
    for (int m = 0; m < g.n; ++m)
        CHECK(std::abs(fs.values[m] - f1.values[m] - f2.values[m]) <= 1e-12 * scale);
}

TEST_CASE("moyal identity through the modulation norm") {
    GridSpec g = self_dual_grid(1, 64);
    Window phi = gaussian_window(g);
    Rng rng(99);
    for (int t = 0; t < 20; ++t) {
        SampledField f = random_gaussian_decay_field(g, rng);
        double m22 = modulation_norm(f, phi, 2.0, 2.0, Weight(), ModulationFlavor::M);
        double expect = f.l2_grid_norm() * phi.l2_grid;
        CHECK(std::abs(m22 * m22 - expect * expect) / (expect * expect) <= 1e-6);
    }
    CHECK(modulation_norm(SampledField(g), phi, 2.0, 2.0, Weight(), ModulationFlavor::M) == 0.0);
}

TEST_CASE("modulation norm homogeneity at quasi-Banach exponents") {
    GridSpec g = self_dual_grid(1, 16);
    Window phi = gaussian_window(g);
    Rng rng(12);
    SampledField f = random_gaussian_decay_field(g, rng);
    SampledField f2(g);
    for (int m = 0; m < g.n; ++m) f2.values[m] = 2.0 * f.values[m];
    Weight w = Weight::poly_bracket(1.0);
    double n1 = modulation_norm(f, phi, 0.5, 0.5, w, ModulationFlavor::M);
    double n2 = modulation_norm(f2, phi, 0.5, 0.5, w, ModulationFlavor::M);
    CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-12));
}

TEST_CASE("modulation norm never increases when exponents increase") {
    GridSpec g = self_dual_grid(1, 12);
    Window phi = gaussian_window(g);
    Rng rng(44);
    SampledField f = random_gaussian_decay_field(g, rng);
    // cell-free comparison: strides 1 with cells overridden through the raw
    // coefficient route would complicate the API; compare at exponent pairs
    // whose cell factors match (p and q both increase, trivial cells via
    // unit-step grid)
    GridSpec unit(1, 12, 1.0);
    Window phiu = gaussian_window(unit);
    SampledField fu(unit);
    for (int m = 0; m < unit.n; ++m) fu.values[m] = f.values[m];
    // h = 1 makes the spatial cell 1; frequency cell 2 pi / 12 < 1 keeps the
    // comparison conservative in the same direction for q1 <= q2
    double a = modulation_norm(fu, phiu, 1.0, 1.0, Weight(), ModulationFlavor::M);
    double b = modulation_norm(fu, phiu, 2.0, 2.0, Weight(), ModulationFlavor::M);
    double c = modulation_norm(fu, phiu, inf_exponent, inf_exponent, Weight(), ModulationFlavor::M);
    CHECK(a * (1 + 1e-12) >= b);
    CHECK(b * (1 + 1e-12) >= c);
}

TEST_CASE("window decay certificate at rate 0.2") {
    GridSpec g = self_dual_grid(1, 32);
    Window phi = gaussian_window(g);
    PhaseSpaceArray v = stft(phi.field, phi);
    GridSpec dual = g.dual();
    double bound = 0.0;
    for (int n = 0; n < g.n; ++n)
        for (int k = 0; k < g.n; ++k) {
            double x = g.coord(n), xi = dual.coord(k);
            bound = std::max(bound, std::abs(v.values[static_cast<std::size_t>(n) * g.n + k]) *
                                        std::exp(0.2 * (std::abs(x) + std::abs(xi))));
        }
    CHECK(bound < 1.0); // comfortably finite; the gaussian decays far faster
}

TEST_CASE("norm equivalence constants between window and canonical dual are stable") {
    auto measure = [](int n) {
        GridSpec g = self_dual_grid(1, n);
        GaborSystem sys(g, 1, 1, gaussian_window(g));
        compute_dual_window(sys);
        // normalize to unit grid L2 so the measured constants compare the
        // window shapes, not the dual's N-dependent overall scale
        SampledField dual_field = sys.dual->field;
        double scale = 1.0 / sys.dual->l2_grid;
        for (auto& v : dual_field.values) v *= scale;
        Window dual = custom_window(std::move(dual_field));
        Rng rng(7);
        double lo = 1e300, hi = 0.0;
        for (int t = 0; t < 20; ++t) {
            SampledField f = random_gaussian_decay_field(g, rng);
            double a = modulation_norm(f, sys.window, 1.0, 1.0, Weight(), ModulationFlavor::M);
            double b = modulation_norm(f, dual, 1.0, 1.0, Weight(), ModulationFlavor::M);
            lo = std::min(lo, a / b);
            hi = std::max(hi, a / b);
        }
        return std::pair<double, double>{lo, hi};
    };
    auto [lo16, hi16] = measure(16);
    auto [lo32, hi32] = measure(32);
    CHECK(hi16 / lo16 < 1e4); // measured equivalence constants, not assumed 1
    CHECK(hi32 / lo32 < 1e4);
    CHECK(hi32 / hi16 < 1.1);
    CHECK(hi32 / hi16 > 0.9);
    CHECK(lo32 / lo16 < 1.1);
    CHECK(lo32 / lo16 > 0.9);
}
