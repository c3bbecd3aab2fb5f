#include "modspace/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <numbers>

#include "modspace/fourier.hpp"
#include "modspace/gabor.hpp"
#include "modspace/mixed_norm.hpp"
#include "modspace/parallel.hpp"
#include "modspace/psdo.hpp"
#include "modspace/rng.hpp"
#include "modspace/spectral.hpp"
#include "modspace/trace.hpp"

namespace modspace {

namespace {

using Json = nlohmann::ordered_json;

struct Criterion {
    std::string name;
    bool pass = false;
    Json details;
};

struct Ctx {
    Json manifest;
    int threads = 1;

    Json knobs(const std::string& key) const {
        if (manifest.is_object() && manifest.contains(key)) return manifest.at(key);
        return Json::object();
    }
};

double knob(const Json& j, const std::string& key, double fallback) {
    if (j.is_object() && j.contains(key)) return j.at(key).get<double>();
    return fallback;
}

long knobi(const Json& j, const std::string& key, long fallback) {
    if (j.is_object() && j.contains(key)) return j.at(key).get<long>();
    return fallback;
}

SampledField gaussian_envelope_field(const GridSpec& g, Rng& rng, double spread = 4.0) {
    SampledField f(g);
    std::vector<int> idx(g.dim);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        unflatten(i, g.dim, g.n, idx);
        double n2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double x = g.coord(idx[a]);
            n2 += x * x;
        }
        f.values[i] = rng.complex_normal() * std::exp(-n2 / spread);
    }
    return f;
}

SampledField atom_symbol(const GridSpec& g2, std::uint64_t seed) {
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

// ---------------------------------------------------------------- criterion 1

Criterion young_inequality(const Ctx& ctx) {
    const Json k = ctx.knobs("young");
    const long trials = knobi(k, "trials", 200);
    const double tol = knob(k, "tolerance", 1e-12);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 101));

    struct Pair {
        const char* name;
        Weight omega, v;
    };
    const Pair pairs[] = {
        {"trivial", Weight(), Weight()},
        {"poly2", Weight::poly_bracket(2.0), Weight::poly_bracket(2.0).certified_moderator()},
        {"exp1", Weight::sub_exp(1.0, 1.0), Weight::sub_exp(1.0, 1.0)},
    };
    const double exps[] = {0.5, 1.0, 2.0, inf_exponent};

    Criterion c{"young_inequality", true, {}};
    long violations = 0, total = 0;
    double worst_margin = -1e300;
    for (const Pair& pr : pairs) {
        for (double p : exps) {
            Rng rng(seed + static_cast<std::uint64_t>(p * 977) + std::hash<std::string>{}(pr.name));
            for (long t = 0; t < trials; ++t) {
                int n = 8 + 2 * rng.uniform_int(0, 4); // 8..16
                GridSpec g(1, n, 1.0);
                SampledField f1(g), f2(g);
                for (auto& v : f1.values) v = rng.complex_normal();
                for (auto& v : f2.values) v = rng.complex_normal();
                YoungCheckResult res = young_check(f1, f2, {p}, pr.omega, pr.v);
                ++total;
                if (!res.weight_precondition_ok || res.lhs > res.rhs + tol) ++violations;
                worst_margin = std::max(worst_margin, res.lhs - res.rhs);
            }
        }
    }
    c.pass = violations == 0;
    c.details["trials"] = total;
    c.details["violations"] = violations;
    c.details["worst_lhs_minus_rhs"] = worst_margin;
    c.details["tolerance"] = tol;
    return c;
}

// ---------------------------------------------------------------- criterion 2

Criterion exp_kernel_convolution(const Ctx& ctx) {
    const Json k = ctx.knobs("exp_conv");
    const long n = knobi(k, "n", 16);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 202));

    GridSpec g(1, static_cast<int>(n), 1.0);
    Rng rng(seed);
    SampledField f(g);
    for (auto& v : f.values) v = rng.complex_normal();

    Weight omega = Weight::sub_exp(1.0, 1.0);
    ExpConvCheckResult fast = exp_convolution_check(f, {1.0}, omega, 2.0);
    ExpConvCheckResult slow = exp_convolution_check(f, {1.0}, omega, 0.5);

    Criterion c{"exp_kernel_convolution", fast.admissible && !slow.admissible && fast.lhs <= fast.rhs + 1e-12,
                {}};
    c.details["admissible_r2"] = fast.admissible;
    c.details["admissible_r05"] = slow.admissible;
    c.details["growth_r2"] = fast.doubling_growth;
    c.details["growth_r05"] = slow.doubling_growth;
    c.details["bound_margin_r2"] = fast.rhs - fast.lhs;
    return c;
}

// ---------------------------------------------------------------- criterion 3

Criterion moyal_identity(const Ctx& ctx) {
    const Json k = ctx.knobs("moyal");
    const int n = static_cast<int>(knobi(k, "n", 64));
    const long fields = knobi(k, "fields", 20);
    const double tol = knob(k, "tolerance", 1e-6);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 303));

    GridSpec g = self_dual_grid(1, n);
    Window phi = gaussian_window(g);
    Rng rng(seed);
    double worst = 0.0;
    for (long t = 0; t < fields; ++t) {
        SampledField f = gaussian_envelope_field(g, rng);
        double m22 = modulation_norm(f, phi, 2.0, 2.0, Weight(), ModulationFlavor::M);
        double expect = f.l2_grid_norm() * phi.l2_grid;
        worst = std::max(worst, std::abs(m22 * m22 - expect * expect) / (expect * expect));
    }
    Criterion c{"moyal_identity", worst <= tol, {}};
    c.details["n"] = n;
    c.details["fields"] = fields;
    c.details["worst_rel_err"] = worst;
    c.details["tolerance"] = tol;
    return c;
}

// ---------------------------------------------------------------- criterion 4

Criterion frame_round_trip(const Ctx& ctx) {
    const Json k = ctx.knobs("frame");
    const int n = static_cast<int>(knobi(k, "n", 48));
    const int a = static_cast<int>(knobi(k, "a_step", 4));
    const int b = static_cast<int>(knobi(k, "b_step", 4));
    const long fields = knobi(k, "fields", 20);
    const double tol = knob(k, "tolerance", 1e-8);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 404));

    GridSpec g = self_dual_grid(1, n);
    GaborSystem sys(g, a, b, gaussian_window(g));
    compute_dual_window(sys);

    Rng rng(seed);
    double worst = 0.0;
    for (long t = 0; t < fields; ++t) {
        SampledField f(g);
        for (auto& v : f.values) v = rng.complex_normal();
        SampledField rec = gabor_synthesis(gabor_coefficients(f, sys), *sys.dual);
        long double num = 0.0L, den = 0.0L;
        for (int m = 0; m < g.n; ++m) {
            num += std::norm(rec.values[m] - f.values[m]);
            den += std::norm(f.values[m]);
        }
        worst = std::max(worst, std::sqrt(static_cast<double>(num / den)));
    }
    Criterion c{"gabor_frame_round_trip", worst <= tol, {}};
    c.details["n"] = n;
    c.details["strides"] = Json::array({a, b});
    c.details["frame_bounds"] = Json::array({sys.frame_lower, sys.frame_upper});
    c.details["worst_rel_err"] = worst;
    c.details["tolerance"] = tol;
    return c;
}

// ---------------------------------------------------------------- criterion 5

Criterion stft_trace_identity(const Ctx& ctx) {
    const Json k = ctx.knobs("trace_identity");
    const int n_coarse = static_cast<int>(knobi(k, "n_coarse", 16));
    const int n_fine = static_cast<int>(knobi(k, "n_fine", 32));
    const long fields = knobi(k, "fields", 10);
    const double tol = knob(k, "tolerance", 1e-5);
    const double min_decrease = knob(k, "min_decrease", 2.0);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 505));

    auto worst_at = [&](int n) {
        GridSpec g = self_dual_grid(2, n);
        DimSplit split = make_split(g, 1, 1, 0, {0.0});
        GridSpec gl(1, n, g.step);
        Window phi0 = gaussian_window(gl);
        Window phi2 = gaussian_window(gl);
        Rng rng(seed);
        std::vector<double> res(fields, 0.0);
        parallel_for(static_cast<std::size_t>(fields), ctx.threads, [&](std::size_t t) {
            Rng local(seed + 37 * t);
            SampledField f = gaussian_envelope_field(g, local);
            res[t] = stft_trace_identity_residual(f, split, phi0, phi2);
        });
        double w = 0.0;
        for (double r : res) w = std::max(w, r);
        return w;
    };

    const double coarse = worst_at(n_coarse);
    const double fine = worst_at(n_fine);
    Criterion c{"stft_trace_identity", fine <= tol && fine * min_decrease <= coarse, {}};
    c.details["residual_coarse"] = coarse;
    c.details["residual_fine"] = fine;
    c.details["tolerance"] = tol;
    c.details["min_decrease"] = min_decrease;
    return c;
}

// ---------------------------------------------------------------- criterion 6

Criterion trace_boundedness(const Ctx& ctx) {
    const Json k = ctx.knobs("trace_bound");
    TraceBoundConfig cfg;
    cfg.n_coarse = static_cast<int>(knobi(k, "n_coarse", 16));
    cfg.n_fine = static_cast<int>(knobi(k, "n_fine", 32));
    cfg.p = {2.0, 2.0};
    cfg.q = {2.0, 2.0};
    cfg.p0 = {2.0};
    cfg.q0 = {2.0};
    const double s = knob(k, "s", 1.0);
    cfg.omega = Weight::block_lift({3}, {1}, Weight::poly_bracket(s));
    cfg.omega0 = Weight();
    cfg.theta = Weight::poly_bracket(-s);
    cfg.r_exponent = 2.0;
    cfg.family_random = static_cast<int>(knobi(k, "family_random", 40));
    cfg.family_adversarial = static_cast<int>(knobi(k, "family_adversarial", 10));
    cfg.seed = static_cast<std::uint64_t>(knobi(k, "seed", 606));
    const double max_growth = knob(k, "max_growth", 1.25);

    TraceBoundReport rep = trace_bound_experiment(cfg, ctx.threads);

    // right-inverse identity must be bitwise exact
    GridSpec g = self_dual_grid(2, cfg.n_fine);
    DimSplit split = make_split(g, 1, 1, 0, {0.0});
    GridSpec gl(1, g.n, g.step);
    Rng rng(cfg.seed + 1);
    SampledField f0 = gaussian_envelope_field(gl, rng);
    SampledField back = trace_map(tensor_extension(f0, gaussian_peak_field(gl), split), split);
    bool exact = true;
    for (int i = 0; i < gl.n; ++i)
        if (back.values[i] != f0.values[i]) exact = false;

    Criterion c{"trace_boundedness", rep.theta_finite && rep.growth <= max_growth && exact, {}};
    c.details["c_theta"] = rep.c_theta;
    c.details["theta_finite"] = rep.theta_finite;
    c.details["r_coarse"] = rep.r_coarse;
    c.details["r_fine"] = rep.r_fine;
    c.details["growth"] = rep.growth;
    c.details["max_growth"] = max_growth;
    c.details["right_inverse_exact"] = exact;
    return c;
}

// ---------------------------------------------------------------- criterion 7

Criterion reduction_extension(const Ctx& ctx) {
    const Json k = ctx.knobs("reduce");
    const int n = static_cast<int>(knobi(k, "n", 32));
    const long count = knobi(k, "count", 10);
    const double op_tol = knob(k, "op_tolerance", 1e-6);
    const double rt_tol = knob(k, "round_trip_tolerance", 1e-8);
    const double exact_tol = knob(k, "exact_tolerance", 1e-12);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 707));

    GridSpec g = self_dual_grid(1, n);
    GridSpec g2(2, n, g.step), g3(3, n, g.step), dual = g.dual();
    SampledField peak = gaussian_peak_field(g);

    double worst_op = 0.0, worst_rt = 0.0, worst_exact = 0.0;
    std::vector<std::array<double, 3>> out(count);
    parallel_for(static_cast<std::size_t>(count), ctx.threads, [&](std::size_t t) {
        Rng rng(seed + t);
        // (a) separable gaussian amplitude
        double cx = rng.uniform(-1.0, 1.0), cy = rng.uniform(-1.0, 1.0), cz = rng.uniform(-1.0, 1.0);
        double px = rng.uniform(-1.0, 1.0), py = rng.uniform(-1.0, 1.0), pz = rng.uniform(-1.0, 1.0);
        SampledField a(g3);
        std::vector<int> idx(3);
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            unflatten(i, 3, n, idx);
            double x = g.coord(idx[0]), y = g.coord(idx[1]), z = dual.coord(idx[2]);
            a.values[i] = std::exp(-0.5 * ((x - cx) * (x - cx) + (y - cy) * (y - cy) + (z - cz) * (z - cz))) *
                          std::polar(1.0, px * x + py * y + pz * z);
        }
        OperatorMatrix direct = op_from_amplitude(a);
        OperatorMatrix reduced = op_from_symbol(reduce_amplitude(a), Quantization::kohn_nirenberg);
        double eop = (direct.m - reduced.m).norm() / direct.m.norm();

        // (b) extension round trip on a gaussian-decay symbol
        SampledField a0 = atom_symbol(g2, seed + 100 + t);
        SampledField back = reduce_amplitude(extend_symbol(a0, peak));
        double scale = 0.0, ert = 0.0;
        for (std::size_t i = 0; i < a0.values.size(); ++i) {
            scale = std::max(scale, std::abs(a0.values[i]));
            ert = std::max(ert, std::abs(back.values[i] - a0.values[i]));
        }
        ert /= scale;

        // (c) y-independent amplitudes reduce exactly
        SampledField flat(g3);
        for (std::size_t i = 0; i < flat.values.size(); ++i) {
            unflatten(i, 3, n, idx);
            std::vector<int> s2{idx[0], idx[2]};
            flat.values[i] = a0.at(s2);
        }
        SampledField red = reduce_amplitude(flat);
        double eex = 0.0;
        for (std::size_t i = 0; i < red.values.size(); ++i)
            eex = std::max(eex, std::abs(red.values[i] - a0.values[i]));
        eex /= scale;

        out[t] = {eop, ert, eex};
    });
    for (const auto& row : out) {
        worst_op = std::max(worst_op, row[0]);
        worst_rt = std::max(worst_rt, row[1]);
        worst_exact = std::max(worst_exact, row[2]);
    }

    Criterion c{"reduction_extension", worst_op <= op_tol && worst_rt <= rt_tol && worst_exact <= exact_tol,
                {}};
    c.details["n"] = n;
    c.details["count"] = count;
    c.details["worst_operator_rel_err"] = worst_op;
    c.details["worst_round_trip_rel_err"] = worst_rt;
    c.details["worst_y_independent_err"] = worst_exact;
    c.details["tolerances"] = Json::array({op_tol, rt_tol, exact_tol});
    return c;
}

// ---------------------------------------------------------------- criterion 8

Criterion calculus_transfer_check(const Ctx& ctx) {
    const Json k = ctx.knobs("transfer");
    const int n = static_cast<int>(knobi(k, "n", 32));
    const long count = knobi(k, "count", 10);
    const double tol = knob(k, "tolerance", 1e-6);
    const double rt_tol = knob(k, "round_trip_tolerance", 1e-12);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 808));

    GridSpec g = self_dual_grid(1, n);
    GridSpec g2(2, n, g.step);

    std::vector<std::array<double, 2>> out(count);
    parallel_for(static_cast<std::size_t>(count), ctx.threads, [&](std::size_t t) {
        SampledField a1 = atom_symbol(g2, seed + t);
        SampledField a2 = calculus_transfer(a1, Quantization::weyl, Quantization::kohn_nirenberg);
        CMatrix mw = op_from_symbol(a1, Quantization::weyl).m;
        CMatrix mk = op_from_symbol(a2, Quantization::kohn_nirenberg).m;
        double agree = (mw - mk).norm() / mw.norm();

        SampledField back = calculus_transfer(a2, Quantization::kohn_nirenberg, Quantization::weyl);
        double scale = 0.0, rt = 0.0;
        for (std::size_t i = 0; i < a1.values.size(); ++i) {
            scale = std::max(scale, std::abs(a1.values[i]));
            rt = std::max(rt, std::abs(back.values[i] - a1.values[i]));
        }
        out[t] = {agree, rt / scale};
    });
    double worst = 0.0, worst_rt = 0.0;
    for (const auto& row : out) {
        worst = std::max(worst, row[0]);
        worst_rt = std::max(worst_rt, row[1]);
    }
    Criterion c{"calculus_transfer", worst <= tol && worst_rt <= rt_tol, {}};
    c.details["n"] = n;
    c.details["count"] = count;
    c.details["worst_matrix_rel_err"] = worst;
    c.details["worst_round_trip_err"] = worst_rt;
    c.details["tolerances"] = Json::array({tol, rt_tol});
    return c;
}

// ---------------------------------------------------------------- criterion 9

// self-contained nested-loop reference, independent of the library's
// contraction (mirrors the inductive g_k definition literally)
double reference_norm(const std::vector<Complex>& values, const std::vector<int>& shape,
                      const std::vector<double>& exps, const std::vector<int>& sigma) {
    const int rank = static_cast<int>(shape.size());
    std::vector<int> inv(rank);
    for (int a = 0; a < rank; ++a) inv[sigma[a]] = a;

    std::vector<double> cur(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) cur[i] = std::abs(values[i]);
    std::vector<int> cur_shape = shape, axes(rank);
    for (int a = 0; a < rank; ++a) axes[a] = a;

    for (int kstage = 0; kstage < rank; ++kstage) {
        int orig = inv[kstage];
        int pos = static_cast<int>(std::find(axes.begin(), axes.end(), orig) - axes.begin());
        std::size_t lead = 1, trail = 1;
        for (int a = 0; a < pos; ++a) lead *= static_cast<std::size_t>(cur_shape[a]);
        for (std::size_t a = pos + 1; a < cur_shape.size(); ++a) trail *= static_cast<std::size_t>(cur_shape[a]);
        int nn = cur_shape[pos];
        double p = exps[kstage];
        std::vector<double> next(lead * trail);
        for (std::size_t b = 0; b < lead; ++b)
            for (std::size_t j = 0; j < trail; ++j) {
                double acc = std::isinf(p) ? 0.0 : 0.0;
                if (std::isinf(p)) {
                    for (int i2 = 0; i2 < nn; ++i2)
                        acc = std::max(acc, cur[(b * nn + i2) * trail + j]);
                } else {
                    for (int i2 = 0; i2 < nn; ++i2) acc += std::pow(cur[(b * nn + i2) * trail + j], p);
                    acc = std::pow(acc, 1.0 / p);
                }
                next[b * trail + j] = acc;
            }
        cur = std::move(next);
        cur_shape.erase(cur_shape.begin() + pos);
        axes.erase(axes.begin() + pos);
    }
    return cur[0];
}

Criterion mixed_norm_oracle(const Ctx& ctx) {
    const Json k = ctx.knobs("mixed_norm");
    const long draws = knobi(k, "draws", 100);
    const long triangle_trials = knobi(k, "triangle_trials", 200);
    const double tol = knob(k, "tolerance", 1e-12);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 909));

    Rng rng(seed);
    double worst = 0.0;
    for (long t = 0; t < draws; ++t) {
        int rank = rng.uniform_int(1, 3);
        std::vector<int> shape(rank);
        std::size_t total = 1;
        for (int a = 0; a < rank; ++a) {
            shape[a] = rng.uniform_int(1, 3);
            total *= static_cast<std::size_t>(shape[a]);
        }
        std::vector<Complex> v(total);
        for (auto& c0 : v) c0 = rng.complex_normal();
        std::vector<double> p(rank);
        for (auto& e : p) {
            double pick = rng.uniform();
            e = pick < 0.25 ? inf_exponent : (pick < 0.5 ? rng.uniform(0.3, 1.0) : rng.uniform(1.0, 4.0));
        }
        std::vector<int> sigma(rank);
        for (int a = 0; a < rank; ++a) sigma[a] = a;
        for (int a = rank - 1; a > 0; --a) std::swap(sigma[a], sigma[rng.uniform_int(0, a)]);

        std::vector<std::vector<double>> coords(rank);
        for (int a = 0; a < rank; ++a) {
            coords[a].resize(shape[a]);
            for (int i = 0; i < shape[a]; ++i) coords[a][i] = i;
        }
        MixedNormSpec spec;
        spec.exponents = p;
        spec.permutation = sigma;
        double lib = mixed_quasi_norm(v, shape, coords, spec);
        double ref = reference_norm(v, shape, p, sigma);
        double err = ref > 0.0 ? std::abs(lib - ref) / ref : std::abs(lib);
        worst = std::max(worst, err);
    }

    long triangle_failures = 0;
    for (long t = 0; t < triangle_trials; ++t) {
        std::vector<int> shape{4, 4};
        std::vector<std::vector<double>> coords(2, std::vector<double>{0, 1, 2, 3});
        std::vector<Complex> f(16), h(16), s(16);
        for (int i = 0; i < 16; ++i) {
            f[i] = rng.complex_normal();
            h[i] = rng.complex_normal();
            s[i] = f[i] + h[i];
        }
        MixedNormSpec spec;
        spec.exponents = {rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)};
        double r = std::min({spec.exponents[0], spec.exponents[1], 1.0});
        double nf = mixed_quasi_norm(f, shape, coords, spec);
        double nh = mixed_quasi_norm(h, shape, coords, spec);
        double ns = mixed_quasi_norm(s, shape, coords, spec);
        if (std::pow(ns, r) > std::pow(nf, r) + std::pow(nh, r) + 1e-12) ++triangle_failures;
    }

    Criterion c{"mixed_norm_oracle", worst <= tol && triangle_failures == 0, {}};
    c.details["draws"] = draws;
    c.details["worst_rel_err"] = worst;
    c.details["triangle_trials"] = triangle_trials;
    c.details["triangle_failures"] = triangle_failures;
    c.details["tolerance"] = tol;
    return c;
}

// --------------------------------------------------------------- criterion 10

Criterion spectral_basics(const Ctx& ctx) {
    const Json k = ctx.knobs("spectral");
    const long count = knobi(k, "count", 50);
    const double tol = knob(k, "tolerance", 1e-10);
    const std::uint64_t seed = static_cast<std::uint64_t>(knobi(k, "seed", 1010));

    Rng rng(seed);
    double worst_ey = 0.0, worst_i2 = 0.0;
    long monotone_failures = 0;
    for (long t = 0; t < count; ++t) {
        int n = rng.uniform_int(2, 16);
        CMatrix m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c0 = 0; c0 < n; ++c0) m(r, c0) = rng.complex_normal();

        Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        CMatrix t1 = svd.singularValues()(0) * svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
        SingularSpectrum full = singular_values(m);
        SingularSpectrum rest = singular_values(m - t1);
        worst_ey = std::max(worst_ey, std::abs(rest.values[0] - full.values[1]) /
                                          std::max(full.values[0], 1e-300));

        double i2 = schatten_quasi_norm(full, 2.0);
        worst_i2 = std::max(worst_i2, std::abs(i2 - m.norm()) / m.norm());

        double prev = -1.0;
        for (double p : {0.5, 1.0, 2.0, 4.0, inf_exponent}) {
            double v = schatten_quasi_norm(full, p);
            if (prev >= 0.0 && v > prev * (1.0 + 1e-12)) ++monotone_failures;
            prev = v;
        }
    }
    Criterion c{"spectral_basics", worst_ey <= tol && worst_i2 <= tol && monotone_failures == 0, {}};
    c.details["count"] = count;
    c.details["worst_eckart_young_err"] = worst_ey;
    c.details["worst_i2_frobenius_err"] = worst_i2;
    c.details["monotone_failures"] = monotone_failures;
    c.details["tolerance"] = tol;
    return c;
}

// --------------------------------------------------------------- criterion 11

Criterion schatten_bound(const Ctx& ctx) {
    const Json k = ctx.knobs("schatten");
    SchattenBoundConfig cfg;
    cfg.n_coarse = static_cast<int>(knobi(k, "n_coarse", 12));
    cfg.n_fine = static_cast<int>(knobi(k, "n_fine", 16));
    cfg.p = knob(k, "p", 2.0);
    cfg.q = knob(k, "q", 1.0);
    cfg.family = static_cast<int>(knobi(k, "family", 10));
    cfg.seed = static_cast<std::uint64_t>(knobi(k, "seed", 1111));
    const double max_growth = knob(k, "max_growth", 1.3);
    const double i2_tol = knob(k, "i2_tolerance", 1e-6);

    SchattenBoundReport rep = schatten_bound_experiment(cfg, ctx.threads);
    Criterion c{"schatten_bound",
                !rep.degenerate && rep.growth <= max_growth && rep.i2_frobenius_max_relerr <= i2_tol, {}};
    c.details["max_ratio_coarse"] = rep.max_coarse;
    c.details["max_ratio_fine"] = rep.max_fine;
    c.details["growth"] = rep.growth;
    c.details["max_growth"] = max_growth;
    c.details["i2_frobenius_max_relerr"] = rep.i2_frobenius_max_relerr;
    c.details["frame_bounds"] = Json::array({rep.frame_lower, rep.frame_upper});
    c.details["nuclear_surrogate"] = rep.nuclear_surrogate;
    return c;
}

using CriterionFn = Criterion (*)(const Ctx&);

struct SuiteEntry {
    const char* suite;
    CriterionFn fn;
};

const SuiteEntry kSuiteTable[] = {
    {"young", young_inequality},
    {"young", exp_kernel_convolution},
    {"young", mixed_norm_oracle},
    {"moyal", moyal_identity},
    {"moyal", frame_round_trip},
    {"trace", stft_trace_identity},
    {"trace", trace_boundedness},
    {"reduce", reduction_extension},
    {"transfer", calculus_transfer_check},
    {"schatten", spectral_basics},
    {"schatten", schatten_bound},
};

} // namespace

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"young", "moyal", "trace",    "reduce",
                                                "transfer", "schatten", "all"};
    return names;
}

VerifyResult run_verify(const std::string& suite, const std::string& manifest_json,
                        const VerifyOptions& options) {
    const auto& names = verify_suite_names();
    require(std::find(names.begin(), names.end(), suite) != names.end(), ErrorCode::bad_argument,
            "unknown suite: " + suite);

    Ctx ctx;
    ctx.threads = resolve_threads(options.threads);
    if (!manifest_json.empty()) {
        nlohmann::json parsed = nlohmann::json::parse(manifest_json, nullptr, false);
        require(!parsed.is_discarded() && parsed.is_object(), ErrorCode::bad_argument,
                "manifest does not parse");
        ctx.manifest = parsed;
    }

    Json report;
    report["suite"] = suite;
    report["deterministic"] = options.deterministic;
    report["manifest"] = ctx.manifest.is_null() ? Json::object() : ctx.manifest;

    VerifyResult result;
    result.all_pass = true;
    Json criteria = Json::array();

    const auto t0 = std::chrono::steady_clock::now();
    for (const SuiteEntry& entry : kSuiteTable) {
        if (suite != "all" && suite != entry.suite) continue;
        const auto c0 = std::chrono::steady_clock::now();
        Criterion c = entry.fn(ctx);
        const auto c1 = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(c1 - c0).count();

        Json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["details"] = c.details;
        jc["wall_time_s"] = options.deterministic ? 0.0 : secs;
        criteria.push_back(jc);

        result.criteria.emplace_back(c.name, c.pass);
        result.all_pass = result.all_pass && c.pass;
    }
    const auto t1 = std::chrono::steady_clock::now();

    report["criteria"] = criteria;
    report["all_pass"] = result.all_pass;
    report["wall_time_s"] = options.deterministic ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
    result.report_json = report.dump(2) + "\n";
    return result;
}

} // namespace modspace
