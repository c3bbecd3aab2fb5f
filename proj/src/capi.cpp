#include "modspace/modspace.h"

#include <cstring>
#include <string>

#include "modspace/field_io.hpp"
#include "modspace/gabor.hpp"
#include "modspace/manifest.hpp"
#include "modspace/psdo.hpp"
#include "modspace/spectral.hpp"
#include "modspace/trace.hpp"
#include "modspace/verify.hpp"

using namespace modspace;

struct ms_field {
    SampledField f;
};

namespace {

thread_local std::string g_last_error;

ms_status to_status(const Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
        case ErrorCode::io_failure: return MS_ERR_IO;
        case ErrorCode::grid_mismatch: return MS_ERR_GRID_MISMATCH;
        case ErrorCode::bad_argument: return MS_ERR_BAD_ARG;
        case ErrorCode::not_a_frame: return MS_ERR_NOT_A_FRAME;
        case ErrorCode::numerical_failure: return MS_ERR_NUMERIC;
        case ErrorCode::internal: return MS_ERR_INTERNAL;
    }
    return MS_ERR_INTERNAL;
}

template <typename Fn>
ms_status guarded(Fn&& fn) {
    try {
        fn();
        return MS_OK;
    } catch (const Error& e) {
        return to_status(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return MS_ERR_INTERNAL;
    }
}

ms_status require_out(const void* p) {
    if (p) return MS_OK;
    g_last_error = "null pointer argument";
    return MS_ERR_BAD_ARG;
}

OperatorMatrix build_operator(const SampledField& sym_or_amp, double quant_t, bool amplitude) {
    if (amplitude) {
        require(sym_or_amp.grid.dim % 3 == 0, ErrorCode::bad_argument, "amplitude fields need 3d axes");
        return op_from_amplitude(sym_or_amp);
    }
    require(sym_or_amp.grid.dim % 2 == 0, ErrorCode::bad_argument, "symbol fields need 2d axes");
    if (quant_t == 0.0) return op_from_symbol(sym_or_amp, Quantization::kohn_nirenberg);
    if (quant_t == 0.5) return op_from_symbol(sym_or_amp, Quantization::weyl);
    if (quant_t == 1.0) return op_from_symbol(sym_or_amp, Quantization::right);
    fail(ErrorCode::bad_argument, "quantization parameter must be 0, 0.5 or 1");
}

} // namespace

extern "C" {

const char* ms_last_error(void) { return g_last_error.c_str(); }

void ms_string_free(char* s) { delete[] s; }

ms_status ms_field_create(int dim, int n, double step, const double* values, ms_field** out) {
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] {
        require(dim >= 1, ErrorCode::bad_argument, "field dimension must be positive");
        GridSpec grid(dim, n, step);
        auto* handle = new ms_field{SampledField(grid)};
        if (values) {
            for (std::size_t i = 0; i < handle->f.values.size(); ++i)
                handle->f.values[i] = Complex(values[2 * i], values[2 * i + 1]);
            try {
                handle->f.check_finite();
            } catch (...) {
                delete handle;
                throw;
            }
        }
        *out = handle;
    });
}

ms_status ms_field_read(const char* path, ms_field** out) {
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] { *out = new ms_field{read_field(path)}; });
}

ms_status ms_field_write(const ms_field* f, const char* path) {
    if (ms_status s = require_out(f); s != MS_OK) return s;
    return guarded([&] { write_field(f->f, path); });
}

void ms_field_free(ms_field* f) { delete f; }

int ms_field_dim(const ms_field* f) { return f ? f->f.grid.dim : 0; }
int ms_field_n(const ms_field* f) { return f ? f->f.grid.n : 0; }
double ms_field_step(const ms_field* f) { return f ? f->f.grid.step : 0.0; }
size_t ms_field_count(const ms_field* f) { return f ? f->f.values.size() : 0; }

ms_status ms_field_values(const ms_field* f, double* out, size_t capacity) {
    if (ms_status s = require_out(f); s != MS_OK) return s;
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] {
        require(capacity >= 2 * f->f.values.size(), ErrorCode::bad_argument, "output buffer too small");
        for (std::size_t i = 0; i < f->f.values.size(); ++i) {
            out[2 * i] = f->f.values[i].real();
            out[2 * i + 1] = f->f.values[i].imag();
        }
    });
}

ms_status ms_gaussian_window(int dim, int n, double step, ms_field** out) {
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] {
        require(dim >= 1, ErrorCode::bad_argument, "field dimension must be positive");
        *out = new ms_field{gaussian_window(GridSpec(dim, n, step)).field};
    });
}

ms_status ms_stft(const ms_field* f, const ms_field* window, ms_field** out) {
    if (ms_status s = require_out(f); s != MS_OK) return s;
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] {
        Window w = window ? custom_window(window->f) : gaussian_window(f->f.grid);
        PhaseSpaceArray v = stft(f->f, w);
        GridSpec out_grid(2 * f->f.grid.dim, f->f.grid.n, f->f.grid.step);
        *out = new ms_field{SampledField(out_grid, std::move(v.values))};
    });
}

ms_status ms_norm(const ms_field* f, const char* manifest_json, double* out) {
    if (ms_status s = require_out(f); s != MS_OK) return s;
    if (ms_status s = require_out(out); s != MS_OK) return s;
    if (ms_status s = require_out(manifest_json); s != MS_OK) return s;
    return guarded([&] { *out = compute_norm(f->f, parse_norm_request(manifest_json)); });
}

ms_status ms_trace(const ms_field* f, int d1, int d2, int d3, const double* z, ms_field** out) {
    if (ms_status s = require_out(f); s != MS_OK) return s;
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] {
        std::vector<double> zv(d2 > 0 ? d2 : 0, 0.0);
        if (z)
            for (int a = 0; a < d2; ++a) zv[a] = z[a];
        DimSplit split = make_split(f->f.grid, d1, d2, d3, zv);
        *out = new ms_field{trace_map(f->f, split)};
    });
}

ms_status ms_trace_residual(const ms_field* f, int d1, int d2, int d3, const double* z, double* out) {
    if (ms_status s = require_out(f); s != MS_OK) return s;
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] {
        std::vector<double> zv(d2 > 0 ? d2 : 0, 0.0);
        if (z)
            for (int a = 0; a < d2; ++a) zv[a] = z[a];
        DimSplit split = make_split(f->f.grid, d1, d2, d3, zv);
        Window phi0 = gaussian_window(GridSpec(d1 + d3, f->f.grid.n, f->f.grid.step));
        Window phi2 = gaussian_window(GridSpec(d2, f->f.grid.n, f->f.grid.step));
        *out = stft_trace_identity_residual(f->f, split, phi0, phi2);
    });
}

ms_status ms_psdo_reduce(const ms_field* amplitude, ms_field** symbol) {
    if (ms_status s = require_out(amplitude); s != MS_OK) return s;
    if (ms_status s = require_out(symbol); s != MS_OK) return s;
    return guarded([&] { *symbol = new ms_field{reduce_amplitude(amplitude->f)}; });
}

ms_status ms_psdo_apply(const ms_field* symbol_or_amplitude, double quant_t, const ms_field* f,
                        ms_field** out) {
    if (ms_status s = require_out(symbol_or_amplitude); s != MS_OK) return s;
    if (ms_status s = require_out(f); s != MS_OK) return s;
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] {
        const int dn = f->f.grid.dim;
        const int ds = symbol_or_amplitude->f.grid.dim;
        require(ds == 2 * dn || ds == 3 * dn, ErrorCode::grid_mismatch,
                "operator field rank must be 2 or 3 times the target field rank");
        OperatorMatrix op = build_operator(symbol_or_amplitude->f, quant_t, ds == 3 * dn);
        require(op.grid == f->f.grid, ErrorCode::grid_mismatch, "operator grid does not match the field");
        Eigen::Map<const CVector> fv(f->f.values.data(), static_cast<Eigen::Index>(f->f.values.size()));
        CVector gv = op.m * fv;
        SampledField result(op.grid);
        for (std::size_t i = 0; i < result.values.size(); ++i) result.values[i] = gv(static_cast<Eigen::Index>(i));
        *out = new ms_field{std::move(result)};
    });
}

ms_status ms_schatten(const ms_field* symbol_or_amplitude, int is_amplitude, double p, double* out) {
    if (ms_status s = require_out(symbol_or_amplitude); s != MS_OK) return s;
    if (ms_status s = require_out(out); s != MS_OK) return s;
    return guarded([&] {
        OperatorMatrix op = build_operator(symbol_or_amplitude->f, 0.0, is_amplitude != 0);
        *out = schatten_quasi_norm(singular_values(op.m, op.provenance), p);
    });
}

ms_status ms_verify(const char* suite, const char* manifest_json, int deterministic, int threads,
                    char** report, int* all_passed) {
    if (ms_status s = require_out(suite); s != MS_OK) return s;
    return guarded([&] {
        VerifyOptions opt;
        opt.deterministic = deterministic != 0;
        opt.threads = threads;
        VerifyResult res = run_verify(suite, manifest_json ? manifest_json : "", opt);
        if (report) {
            char* buf = new char[res.report_json.size() + 1];
            std::memcpy(buf, res.report_json.c_str(), res.report_json.size() + 1);
            *report = buf;
        }
        if (all_passed) *all_passed = res.all_pass ? 1 : 0;
    });
}

} // extern "C"
