#include <doctest.h>

#include <cmath>

#include "modspace/rng.hpp"
#include "modspace/spectral.hpp"
#include "oracles.hpp"

using namespace modspace;

namespace {

CMatrix random_matrix(int rows, int cols, Rng& rng) {
    CMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rng.complex_normal();
    return m;
}

CMatrix random_unitary(int n, Rng& rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_matrix(n, n, rng));
    return qr.householderQ();
}

} // namespace

TEST_CASE("singular values of elementary matrices") {
    SUBCASE("rank one") {
        Rng rng(1);
        CVector u = random_matrix(5, 1, rng), v = random_matrix(5, 1, rng);
        CMatrix t = u * v.adjoint();
        SingularSpectrum s = singular_values(t);
        CHECK(s.values[0] == doctest::Approx(u.norm() * v.norm()).epsilon(1e-12));
        for (std::size_t j = 1; j < s.values.size(); ++j) CHECK(s.values[j] <= 1e-12 * s.values[0]);
    }
    SUBCASE("diagonal with signs") {
        CMatrix t = CMatrix::Zero(3, 3);
        t(0, 0) = 3.0;
        t(1, 1) = 1.0;
        t(2, 2) = -2.0;
        SingularSpectrum s = singular_values(t);
        CHECK(s.values[0] == doctest::Approx(3.0));
        CHECK(s.values[1] == doctest::Approx(2.0));
        CHECK(s.values[2] == doctest::Approx(1.0));
    }
    SUBCASE("random 3x3 against the characteristic-polynomial oracle") {
        Rng rng(7);
        for (int t = 0; t < 25; ++t) {
            CMatrix m = random_matrix(3, 3, rng);
            CMatrix g = m.adjoint() * m; // Hermitian PSD
            std::vector<Complex> a(9);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) a[3 * r + c] = g(r, c);
            std::vector<double> ev = oracles::hermitian3_eigenvalues(a);
            SingularSpectrum s = singular_values(m);
            for (int j = 0; j < 3; ++j)
                CHECK(s.values[j] == doctest::Approx(std::sqrt(std::max(0.0, ev[j]))).epsilon(1e-10));
        }
    }
}

TEST_CASE("schatten quasi-norm") {
    SingularSpectrum s;
    s.values = {4.0, 1.0};
    CHECK(schatten_quasi_norm(s, inf_exponent) == doctest::Approx(4.0));
    CHECK(schatten_quasi_norm(s, 0.5) == doctest::Approx(9.0).epsilon(1e-13)); // (2+1)^2
    CHECK(schatten_quasi_norm(s, 2.0) == doctest::Approx(std::sqrt(17.0)).epsilon(1e-13));
    CHECK_THROWS_AS(schatten_quasi_norm(s, 0.0), Error);

    SUBCASE("monotone nonincreasing in p and dominating the operator norm") {
        Rng rng(3);
        for (int t = 0; t < 50; ++t) {
            int n = rng.uniform_int(2, 16);
            SingularSpectrum spec = singular_values(random_matrix(n, n, rng));
            double prev = -1.0;
            for (double p : {0.4, 0.7, 1.0, 1.5, 2.0, 4.0, 16.0, inf_exponent}) {
                double v = schatten_quasi_norm(spec, p);
                if (prev >= 0.0) CHECK(v <= prev * (1.0 + 1e-12));
                CHECK(v * (1.0 + 1e-12) >= spec.values[0]);
                prev = v;
            }
            CHECK(schatten_quasi_norm(spec, 2.0) ==
                  doctest::Approx(std::sqrt([&] {
                      double a = 0;
                      for (double x : spec.values) a += x * x;
                      return a;
                  }())).epsilon(1e-12));
        }
    }
}

TEST_CASE("unitary invariance of singular values") {
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
        CMatrix m = random_matrix(6, 6, rng);
        CMatrix u = random_unitary(6, rng), v = random_unitary(6, rng);
        SingularSpectrum a = singular_values(m);
        SingularSpectrum b = singular_values(u * m * v);
        for (int j = 0; j < 6; ++j) CHECK(a.values[j] == doctest::Approx(b.values[j]).epsilon(1e-10));
    }
}

TEST_CASE("eckart-young: the rank-1 truncation achieves sigma_2") {
    Rng rng(19);
    for (int t = 0; t < 20; ++t) {
        CMatrix m = random_matrix(4, 4, rng);
        Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        CMatrix t1 = svd.singularValues()(0) * svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
        SingularSpectrum rest = singular_values(m - t1);
        SingularSpectrum full = singular_values(m);
        CHECK(rest.values[0] == doctest::Approx(full.values[1]).epsilon(1e-10));
    }
}

TEST_CASE("weighted M2 conjugation") {
    GridSpec g = self_dual_grid(1, 12);
    GaborSystem sys(g, 1, 1, gaussian_window(g));
    compute_dual_window(sys);
    Rng rng(23);

    SUBCASE("trivial weights reproduce the plain singular values") {
        CMatrix t = random_matrix(g.n, g.n, rng);
        SingularSpectrum direct = singular_values(t);
        SingularSpectrum conj = singular_values(weighted_m2_conjugate(t, Weight(), Weight(), sys));
        for (int j = 0; j < g.n; ++j)
            CHECK(conj.values[j] == doctest::Approx(direct.values[j]).epsilon(1e-6));
        // the rest of the enlarged spectrum vanishes
        for (std::size_t j = g.n; j < conj.values.size(); ++j)
            CHECK(conj.values[j] <= 1e-8 * direct.values[0]);
    }
    SUBCASE("zero operator maps to the zero spectrum") {
        CMatrix z = CMatrix::Zero(g.n, g.n);
        SingularSpectrum s = singular_values(weighted_m2_conjugate(z, Weight(), Weight(), sys));
        for (double v : s.values) CHECK(v == 0.0);
    }
    SUBCASE("identity with matching weights keeps the top of the spectrum at one") {
        Weight w = Weight::poly_bracket(1.0);
        CMatrix id = CMatrix::Identity(g.n, g.n);
        SingularSpectrum s = singular_values(weighted_m2_conjugate(id, w, w, sys));
        CHECK(s.values[0] >= 1.0 - 1e-6);
        CHECK(s.values[g.n - 1] >= 1.0 - 1e-6); // N eigenvalues of the projector survive
        CHECK(s.values[g.n] <= 1e-6);
    }
    SUBCASE("missing dual window is rejected") {
        GaborSystem nodual(g, 1, 1, gaussian_window(g));
        CHECK_THROWS_AS(weighted_m2_conjugate(CMatrix::Identity(g.n, g.n), Weight(), Weight(), nodual),
                        Error);
    }
}

TEST_CASE("schatten bound experiment at reduced size") {
    SchattenBoundConfig cfg;
    cfg.n_coarse = 8;
    cfg.n_fine = 12;
    cfg.family = 3;
    cfg.seed = 5;

    SchattenBoundReport rep = schatten_bound_experiment(cfg);
    CHECK_FALSE(rep.degenerate);
    CHECK_FALSE(rep.nuclear_surrogate);
    CHECK(rep.max_fine > 0.0);
    CHECK(std::isfinite(rep.max_fine));
    CHECK(rep.i2_frobenius_max_relerr <= 1e-6);
    CHECK(rep.growth > 0.5);
    CHECK(rep.growth < 2.0);
    CHECK(rep.frame_upper >= rep.frame_lower);
    CHECK(rep.ratios_fine.size() == 3);

    SUBCASE("exponent violation is rejected") {
        SchattenBoundConfig bad = cfg;
        bad.p = 2.0;
        bad.q = 3.0; // q > min(p, p') = 2
        CHECK_THROWS_AS(schatten_bound_experiment(bad), Error);
    }
    SUBCASE("p <= 1 doubles as the nuclear surrogate") {
        SchattenBoundConfig nuc = cfg;
        nuc.p = 1.0;
        nuc.q = 1.0;
        nuc.family = 1;
        SchattenBoundReport r2 = schatten_bound_experiment(nuc);
        CHECK(r2.nuclear_surrogate);
    }
}
