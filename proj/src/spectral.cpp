#include "modspace/spectral.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "modspace/parallel.hpp"
#include "modspace/rng.hpp"

namespace modspace {

SingularSpectrum singular_values(const CMatrix& t, const std::string& source) {
    require(t.rows() > 0 && t.cols() > 0, ErrorCode::bad_argument, "empty matrix");
    require(t.rows() <= 4096 && t.cols() <= 4096, ErrorCode::bad_argument,
            "dense SVD guarded at 4096 x 4096");
    require(t.allFinite(), ErrorCode::bad_argument, "matrix has non-finite entries");

    SingularSpectrum s;
    s.source = source;
    if (t.rows() >= 64 || t.cols() >= 64) {
        Eigen::BDCSVD<CMatrix> svd(t);
        require(svd.info() == Eigen::Success, ErrorCode::numerical_failure, "SVD did not converge");
        s.values.assign(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    } else {
        Eigen::JacobiSVD<CMatrix> svd(t);
        require(svd.info() == Eigen::Success, ErrorCode::numerical_failure, "SVD did not converge");
        s.values.assign(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    }
    std::sort(s.values.begin(), s.values.end(), std::greater<double>());
    return s;
}

double schatten_quasi_norm(const SingularSpectrum& s, double p) {
    require(p > 0.0, ErrorCode::bad_argument, "Schatten exponent must be positive");
    if (s.values.empty()) return 0.0;
    const double top = s.values.front();
    if (std::isinf(p) || top == 0.0) return top;
    long double acc = 0.0L;
    for (double v : s.values) acc += std::pow(static_cast<long double>(v / top), static_cast<long double>(p));
    return top * static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(p)));
}

CMatrix weighted_m2_conjugate(const CMatrix& t, const Weight& omega1, const Weight& omega2,
                              const GaborSystem& system) {
    require(system.dual.has_value(), ErrorCode::not_a_frame, "system has no dual window");
    const std::size_t cube = system.grid.size();
    require(t.rows() == static_cast<Eigen::Index>(cube) && t.cols() == t.rows(), ErrorCode::grid_mismatch,
            "operator size does not match the system grid");

    CMatrix analysis = analysis_matrix(system);                    // L x n
    CMatrix synth = synthesis_matrix(system, *system.dual);        // n x L
    const Eigen::Index L = analysis.rows();

    const GridSpec dual = system.grid.dual();
    const int d = system.grid.dim;
    const int mx = system.grid.n / system.a_step;
    const int mk = system.grid.n / system.b_step;

    CVector d2(L), d1inv(L);
    std::vector<double> pt(2 * d);
    std::size_t nfreq = 1;
    for (int a = 0; a < d; ++a) nfreq *= static_cast<std::size_t>(mk);
    for (Eigen::Index lam = 0; lam < L; ++lam) {
        std::size_t s = static_cast<std::size_t>(lam) / nfreq;
        std::size_t qq = static_cast<std::size_t>(lam) % nfreq;
        for (int a = d - 1; a >= 0; --a) {
            pt[d + a] = dual.coord(static_cast<int>(qq % mk) * system.b_step);
            qq /= mk;
        }
        for (int a = d - 1; a >= 0; --a) {
            pt[a] = system.grid.coord(static_cast<int>(s % mx) * system.a_step);
            s /= mx;
        }
        d2(lam) = omega2.eval(pt);
        d1inv(lam) = 1.0 / omega1.eval(pt);
    }

    CMatrix result = analysis * (t * synth);
    result = d2.asDiagonal() * result * d1inv.asDiagonal();
    return result;
}

namespace {

SampledField seeded_schatten_symbol(const GridSpec& g2, std::uint64_t seed) {
    Rng rng(seed);
    const int atoms = 5;
    const int dim = g2.dim;
    const GridSpec dual = g2.dual();
    std::vector<std::vector<double>> ctr(atoms, std::vector<double>(dim));
    std::vector<std::vector<double>> frq(atoms, std::vector<double>(dim));
    std::vector<Complex> amp(atoms);
    for (int j = 0; j < atoms; ++j) {
        for (int a = 0; a < dim; ++a) {
            ctr[j][a] = rng.uniform(-1.5, 1.5);
            frq[j][a] = rng.uniform(-1.0, 1.0);
        }
        amp[j] = rng.complex_normal();
    }
    SampledField f(g2);
    std::vector<int> idx(dim);
    std::vector<double> x(dim);
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

} // namespace

SchattenBoundReport schatten_bound_experiment(const SchattenBoundConfig& config, int threads) {
    const double p = config.p;
    const double pprime = std::isinf(p) ? 1.0 : (p > 1.0 ? p / (p - 1.0) : inf_exponent);
    require(config.q <= std::min(p, pprime) + 1e-12, ErrorCode::bad_argument,
            "exponent violation: q must not exceed min(p, p')");

    SchattenBoundReport rep;
    rep.nuclear_surrogate = p <= 1.0;

    for (int pass = 0; pass < 2; ++pass) {
        const int n = pass == 0 ? config.n_coarse : config.n_fine;
        GridSpec g = self_dual_grid(1, n);
        GridSpec g2 = self_dual_grid(2, n);
        GridSpec g3 = self_dual_grid(3, n);

        GaborSystem system(g, 1, 1, gaussian_window(g));
        compute_dual_window(system);
        if (pass == 1) {
            rep.frame_lower = system.frame_lower;
            rep.frame_upper = system.frame_upper;
        }
        Window phi3 = gaussian_window(g3);
        SampledField phi_peak = gaussian_peak_field(g);

        std::vector<double> ratios(config.family, 0.0);
        std::vector<double> i2_errs(config.family, 0.0);
        parallel_for(static_cast<std::size_t>(config.family), threads, [&](std::size_t m) {
            SampledField a0 = seeded_schatten_symbol(g2, config.seed + 17 * m + 1);
            SampledField a = extend_symbol(a0, phi_peak);

            double denom = amplitude_mod_norm(a, phi3, {p, inf_exponent, p},
                                              {config.q, config.q, config.q}, config.omega,
                                              ModulationFlavor::M);
            OperatorMatrix op = op_from_amplitude(a);
            CMatrix conj = weighted_m2_conjugate(op.m, config.omega1, config.omega2, system);
            SingularSpectrum spec = singular_values(conj, "conjugated amplitude operator");
            double numer = schatten_quasi_norm(spec, p);
            ratios[m] = denom > 0.0 ? numer / denom : 0.0;

            if (p == 2.0) {
                double frob = conj.norm();
                double i2 = schatten_quasi_norm(spec, 2.0);
                i2_errs[m] = frob > 0.0 ? std::abs(i2 - frob) / frob : 0.0;
            }
        });

        double mx = 0.0, err = 0.0;
        for (double r : ratios) mx = std::max(mx, r);
        for (double e : i2_errs) err = std::max(err, e);
        if (pass == 0) {
            rep.ratios_coarse = ratios;
            rep.max_coarse = mx;
        } else {
            rep.ratios_fine = ratios;
            rep.max_fine = mx;
            rep.i2_frobenius_max_relerr = std::max(rep.i2_frobenius_max_relerr, err);
        }
    }
    rep.degenerate = rep.max_fine == 0.0;
    rep.growth = rep.max_coarse > 0.0 ? rep.max_fine / rep.max_coarse : 0.0;
    return rep;
}

} // namespace modspace
