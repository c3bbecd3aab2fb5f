// Command-line front end for the modspace shared library.  Everything
// numerical goes through the C API in modspace/modspace.h; this file only
// parses arguments, moves bytes, and maps statuses to exit codes:
//   0 success, 1 verification failure, 2 I/O or configuration problem,
//   3 grid mismatch, 4 invalid argument, 5+ other library errors.

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modspace/modspace.h"

namespace {

int exit_code(ms_status s) { return static_cast<int>(s); }

int report_error(const char* what, ms_status s) {
    std::fprintf(stderr, "error: %s: %s\n", what, ms_last_error());
    return exit_code(s);
}

struct FieldHandle {
    ms_field* p = nullptr;
    ~FieldHandle() { ms_field_free(p); }
};

int load_field(const std::string& path, FieldHandle& out, const char* what) {
    if (ms_status s = ms_field_read(path.c_str(), &out.p); s != MS_OK) return report_error(what, s);
    return 0;
}

bool read_text_file(const std::string& path, std::string& out) {
    std::ifstream in(path);
    if (!in.good()) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

// manifests may be given inline (JSON text) or as a file path
int load_manifest(const std::string& arg, std::string& out) {
    if (arg.empty()) {
        out.clear();
        return 0;
    }
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
        out = arg;
        return 0;
    }
    if (!read_text_file(arg, out)) {
        std::fprintf(stderr, "error: cannot read manifest file: %s\n", arg.c_str());
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"modspace: modulation-space norms, Gabor frames, trace maps and quantizations on periodized grids"};
    app.require_subcommand(1);

    // stft ----------------------------------------------------------------
    std::string stft_in, stft_out, stft_window;
    CLI::App* stft_cmd = app.add_subcommand("stft", "short-time Fourier transform of a field file");
    stft_cmd->add_option("input", stft_in)->required();
    stft_cmd->add_option("-o,--output", stft_out)->required();
    stft_cmd->add_option("--window", stft_window, "window field file (default: canonical Gaussian)");

    // norm ----------------------------------------------------------------
    std::string norm_in, norm_manifest;
    CLI::App* norm_cmd = app.add_subcommand("norm", "modulation / amplitude quasi-norm of a field");
    norm_cmd->add_option("input", norm_in)->required();
    norm_cmd->add_option("-m,--manifest", norm_manifest, "norm manifest (JSON text or file)")->required();

    // trace-check ----------------------------------------------------------
    std::string tr_in, tr_slice_out;
    int tr_d1 = 1, tr_d2 = 1, tr_d3 = 0;
    std::vector<double> tr_z;
    CLI::App* trace_cmd = app.add_subcommand("trace-check", "STFT trace identity residual at a split");
    trace_cmd->add_option("input", tr_in)->required();
    trace_cmd->add_option("--d1", tr_d1);
    trace_cmd->add_option("--d2", tr_d2);
    trace_cmd->add_option("--d3", tr_d3);
    trace_cmd->add_option("--z", tr_z, "restriction point (default: origin)");
    trace_cmd->add_option("--slice-out", tr_slice_out, "also write the sliced field here");

    // psdo-reduce ----------------------------------------------------------
    std::string red_in, red_out;
    CLI::App* reduce_cmd = app.add_subcommand("psdo-reduce", "amplitude -> Kohn-Nirenberg symbol");
    reduce_cmd->add_option("input", red_in)->required();
    reduce_cmd->add_option("-o,--output", red_out)->required();

    // psdo-apply -----------------------------------------------------------
    std::string ap_sym, ap_field, ap_out;
    double ap_t = 0.0;
    CLI::App* apply_cmd = app.add_subcommand("psdo-apply", "apply a quantized symbol or amplitude to a field");
    apply_cmd->add_option("symbol", ap_sym, "symbol (2d axes) or amplitude (3d axes) field file")->required();
    apply_cmd->add_option("field", ap_field)->required();
    apply_cmd->add_option("-o,--output", ap_out)->required();
    apply_cmd->add_option("--quant", ap_t, "quantization t in {0, 0.5, 1} (symbols only)");

    // schatten ---------------------------------------------------------------
    std::string sch_in;
    double sch_p = 2.0;
    bool sch_amp = false;
    CLI::App* schatten_cmd = app.add_subcommand("schatten", "Schatten I_p quasi-norm of the quantized operator");
    schatten_cmd->add_option("input", sch_in)->required();
    schatten_cmd->add_option("-p", sch_p, "Schatten exponent (default 2)");
    schatten_cmd->add_flag("--amplitude", sch_amp, "treat the input as a 3d-axis amplitude");

    // verify -----------------------------------------------------------------
    std::string ver_suite, ver_manifest, ver_report;
    bool ver_det = false;
    int ver_threads = 0;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("suite", ver_suite, "young | moyal | trace | reduce | transfer | schatten | all")
        ->required();
    verify_cmd->add_option("-m,--manifest", ver_manifest, "override manifest (JSON text or file)");
    verify_cmd->add_option("--report", ver_report, "write the report JSON here");
    verify_cmd->add_flag("--deterministic", ver_det, "byte-stable reports (zeroed timings)");
    verify_cmd->add_option("--threads", ver_threads, "worker threads (default: MODSPACE_THREADS)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (stft_cmd->parsed()) {
        FieldHandle in, window, out;
        if (int rc = load_field(stft_in, in, "stft input")) return rc;
        if (!stft_window.empty())
            if (int rc = load_field(stft_window, window, "stft window")) return rc;
        if (ms_status s = ms_stft(in.p, window.p, &out.p); s != MS_OK) return report_error("stft", s);
        if (ms_status s = ms_field_write(out.p, stft_out.c_str()); s != MS_OK)
            return report_error("stft output", s);
        return 0;
    }

    if (norm_cmd->parsed()) {
        FieldHandle in;
        if (int rc = load_field(norm_in, in, "norm input")) return rc;
        std::string manifest;
        if (int rc = load_manifest(norm_manifest, manifest)) return rc;
        double value = 0.0;
        if (ms_status s = ms_norm(in.p, manifest.c_str(), &value); s != MS_OK)
            return report_error("norm", s);
        std::printf("%.17g\n", value);
        return 0;
    }

    if (trace_cmd->parsed()) {
        FieldHandle in;
        if (int rc = load_field(tr_in, in, "trace input")) return rc;
        if (!tr_z.empty() && static_cast<int>(tr_z.size()) != tr_d2) {
            std::fprintf(stderr, "error: --z needs %d coordinates\n", tr_d2);
            return 4;
        }
        const double* z = tr_z.empty() ? nullptr : tr_z.data();
        double residual = 0.0;
        if (ms_status s = ms_trace_residual(in.p, tr_d1, tr_d2, tr_d3, z, &residual); s != MS_OK)
            return report_error("trace-check", s);
        std::printf("%.17g\n", residual);
        if (!tr_slice_out.empty()) {
            FieldHandle sliced;
            if (ms_status s = ms_trace(in.p, tr_d1, tr_d2, tr_d3, z, &sliced.p); s != MS_OK)
                return report_error("trace slice", s);
            if (ms_status s = ms_field_write(sliced.p, tr_slice_out.c_str()); s != MS_OK)
                return report_error("trace slice output", s);
        }
        return 0;
    }

    if (reduce_cmd->parsed()) {
        FieldHandle in, out;
        if (int rc = load_field(red_in, in, "reduce input")) return rc;
        if (ms_status s = ms_psdo_reduce(in.p, &out.p); s != MS_OK) return report_error("psdo-reduce", s);
        if (ms_status s = ms_field_write(out.p, red_out.c_str()); s != MS_OK)
            return report_error("psdo-reduce output", s);
        return 0;
    }

    if (apply_cmd->parsed()) {
        FieldHandle sym, in, out;
        if (int rc = load_field(ap_sym, sym, "psdo-apply symbol")) return rc;
        if (int rc = load_field(ap_field, in, "psdo-apply field")) return rc;
        if (ms_status s = ms_psdo_apply(sym.p, ap_t, in.p, &out.p); s != MS_OK)
            return report_error("psdo-apply", s);
        if (ms_status s = ms_field_write(out.p, ap_out.c_str()); s != MS_OK)
            return report_error("psdo-apply output", s);
        return 0;
    }

    if (schatten_cmd->parsed()) {
        FieldHandle in;
        if (int rc = load_field(sch_in, in, "schatten input")) return rc;
        double value = 0.0;
        if (ms_status s = ms_schatten(in.p, sch_amp ? 1 : 0, sch_p, &value); s != MS_OK)
            return report_error("schatten", s);
        std::printf("%.17g\n", value);
        return 0;
    }

    if (verify_cmd->parsed()) {
        std::string manifest;
        if (int rc = load_manifest(ver_manifest, manifest)) return rc;
        char* report = nullptr;
        int all_passed = 0;
        ms_status s = ms_verify(ver_suite.c_str(), manifest.empty() ? nullptr : manifest.c_str(),
                                ver_det ? 1 : 0, ver_threads, &report, &all_passed);
        if (s != MS_OK) {
            std::fprintf(stderr, "error: verify: %s\n", ms_last_error());
            return 2;
        }
        std::unique_ptr<char, void (*)(char*)> guard(report, ms_string_free);

        // per-criterion table from the report without a JSON dependency:
        // lines with "name" / "pass" pairs are emitted in order
        std::istringstream lines(report);
        std::string line, name;
        while (std::getline(lines, line)) {
            auto grab = [&](const char* key) -> std::string {
                auto pos = line.find(key);
                if (pos == std::string::npos) return {};
                auto colon = line.find(':', pos);
                auto start = line.find_first_not_of(" \"", colon + 1);
                auto end = line.find_last_not_of(" ,\"");
                return line.substr(start, end - start + 1);
            };
            if (line.find("\"name\"") != std::string::npos) name = grab("\"name\"");
            if (line.find("\"pass\"") != std::string::npos && !name.empty()) {
                std::printf("[%s] %s\n", grab("\"pass\"") == "true" ? "PASS" : "FAIL", name.c_str());
                name.clear();
            }
        }
        if (!ver_report.empty()) {
            std::ofstream out(ver_report, std::ios::trunc);
            if (!out.good()) {
                std::fprintf(stderr, "error: cannot write report: %s\n", ver_report.c_str());
                return 2;
            }
            out << report;
        } else {
            std::printf("%s", report);
        }
        return all_passed ? 0 : 1;
    }

    return 2;
}
