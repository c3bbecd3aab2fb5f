#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "modspace/field_io.hpp"
#include "modspace/gabor.hpp"
#include "modspace/modspace.h"
#include "modspace/rng.hpp"

using namespace modspace;

namespace {

std::string temp_path(const char* name) { return std::string("/tmp/modspace_test_") + name; }

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<char>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Runs the CLI named by the MODSPACE_CLI environment variable (set by
// ctest), falling back to the usual build-tree locations; returns the
// process exit code.
int run_cli(const std::string& args) {
    std::string cli;
    if (const char* env = std::getenv("MODSPACE_CLI")) {
        cli = env;
    } else {
        for (const char* candidate : {"../tools/modspace", "build/tools/modspace", "./tools/modspace"}) {
            if (std::ifstream(candidate).good()) {
                cli = candidate;
                break;
            }
        }
    }
    REQUIRE(!cli.empty());
    std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WEXITSTATUS(rc);
}

SampledField random_field(const GridSpec& g, std::uint64_t seed) {
    Rng rng(seed);
    SampledField f(g);
    for (auto& v : f.values) v = rng.complex_normal();
    return f;
}

} // namespace

TEST_CASE("field files round trip byte-identically") {
    Rng rng(88);
    for (int t = 0; t < 5; ++t) {
        GridSpec g(rng.uniform_int(1, 2), 4 + 2 * rng.uniform_int(0, 4), rng.uniform(0.1, 2.0));
        SampledField f = random_field(g, 1000 + t);
        std::string p1 = temp_path("rt1.msf"), p2 = temp_path("rt2.msf");
        write_field(f, p1);

        auto bytes = slurp(p1);
        CHECK(bytes.size() == 22u + 16u * g.size());

        SampledField back = read_field(p1);
        CHECK(back.grid == f.grid);
        for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);

        write_field(back, p2);
        CHECK(slurp(p2) == bytes);
    }
}

TEST_CASE("malformed field files are rejected") {
    std::string good = temp_path("good.msf");
    write_field(random_field(GridSpec(1, 8, 0.5), 3), good);

    SUBCASE("corrupted magic") {
        auto bytes = slurp(good);
        bytes[0] = 'X';
        std::string bad = temp_path("badmagic.msf");
        std::ofstream(bad, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        CHECK_THROWS_AS(read_field(bad), Error);
    }
    SUBCASE("truncated payload") {
        auto bytes = slurp(good);
        bytes.resize(bytes.size() - 7);
        std::string bad = temp_path("trunc.msf");
        std::ofstream(bad, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        CHECK_THROWS_AS(read_field(bad), Error);
    }
    SUBCASE("trailing bytes") {
        auto bytes = slurp(good);
        bytes.push_back(0);
        std::string bad = temp_path("trail.msf");
        std::ofstream(bad, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        CHECK_THROWS_AS(read_field(bad), Error);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(read_field(temp_path("nope.msf")), Error); }
}

TEST_CASE("C API basics") {
    ms_field* f = nullptr;
    REQUIRE(ms_field_create(1, 8, 0.5, nullptr, &f) == MS_OK);
    CHECK(ms_field_dim(f) == 1);
    CHECK(ms_field_n(f) == 8);
    CHECK(ms_field_step(f) == 0.5);
    CHECK(ms_field_count(f) == 8);

    std::vector<double> buf(16, -1.0);
    CHECK(ms_field_values(f, buf.data(), buf.size()) == MS_OK);
    for (double v : buf) CHECK(v == 0.0);
    CHECK(ms_field_values(f, buf.data(), 3) == MS_ERR_BAD_ARG);

    ms_field* bad = nullptr;
    CHECK(ms_field_create(1, 7, 0.5, nullptr, &bad) == MS_ERR_BAD_ARG); // odd N
    CHECK(std::string(ms_last_error()).find("even") != std::string::npos);

    ms_field* w = nullptr;
    REQUIRE(ms_gaussian_window(1, 8, 0.5, &w) == MS_OK);
    ms_field* v = nullptr;
    REQUIRE(ms_stft(f, w, &v) == MS_OK);
    CHECK(ms_field_dim(v) == 2);

    // grid mismatch surfaces as the dedicated status
    ms_field* w16 = nullptr;
    REQUIRE(ms_gaussian_window(1, 16, 0.5, &w16) == MS_OK);
    ms_field* out = nullptr;
    CHECK(ms_stft(f, w16, &out) == MS_ERR_GRID_MISMATCH);

    double norm = -1.0;
    CHECK(ms_norm(f, "{\"p\": 2, \"q\": 2}", &norm) == MS_OK);
    CHECK(norm == 0.0); // zero field
    CHECK(ms_norm(f, "{\"p\": 0, \"q\": 2}", &norm) == MS_ERR_BAD_ARG);
    CHECK(ms_norm(f, "not json", &norm) == MS_ERR_BAD_ARG);

    ms_field_free(f);
    ms_field_free(w);
    ms_field_free(v);
    ms_field_free(w16);
    ms_field_free(bad);
}

TEST_CASE("C API verify rejects unknown suites") {
    char* report = nullptr;
    int ok = 0;
    CHECK(ms_verify("bogus", nullptr, 1, 1, &report, &ok) == MS_ERR_BAD_ARG);
}

TEST_CASE("CLI exit-code contract") {
    GridSpec g = self_dual_grid(1, 16);
    std::string field_path = temp_path("cli_field.msf");
    {
        Rng rng(5);
        SampledField f(g);
        std::vector<int> idx(1);
        for (int m = 0; m < g.n; ++m) {
            double x = g.coord(m);
            f.values[m] = rng.complex_normal() * std::exp(-x * x / 4.0);
        }
        write_field(f, field_path);
    }

    SUBCASE("stft writes a 2d output of the documented size") {
        std::string out = temp_path("cli_stft.msf");
        CHECK(run_cli("stft " + field_path + " -o " + out) == 0);
        auto bytes = slurp(out);
        CHECK(bytes.size() == 22u + 16u * 16u * 16u);
    }
    SUBCASE("corrupted magic exits 2") {
        auto bytes = slurp(field_path);
        bytes[3] = 'x';
        std::string bad = temp_path("cli_bad.msf");
        std::ofstream(bad, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        CHECK(run_cli("stft " + bad + " -o /tmp/modspace_test_never.msf") == 2);
    }
    SUBCASE("window grid mismatch exits 3") {
        GridSpec g32 = self_dual_grid(1, 32);
        std::string w = temp_path("cli_w32.msf");
        write_field(gaussian_window(g32).field, w);
        CHECK(run_cli("stft " + field_path + " --window " + w + " -o /tmp/modspace_test_never.msf") == 3);
    }
    SUBCASE("invalid exponent exits 4") {
        CHECK(run_cli("norm " + field_path + " -m \"{\\\"p\\\": 0, \\\"q\\\": 2}\"") == 4);
    }
    SUBCASE("norm prints a finite value for a valid manifest") {
        CHECK(run_cli("norm " + field_path + " -m \"{\\\"p\\\": 2, \\\"q\\\": 2}\"") == 0);
    }
    SUBCASE("unknown verify suite exits 2") { CHECK(run_cli("verify nonsense") == 2); }
    SUBCASE("tightening a tolerance to the floor makes verify fail with exit 1") {
        CHECK(run_cli("verify reduce -m \"{\\\"reduce\\\": {\\\"n\\\": 16, \\\"count\\\": 2, "
                      "\\\"round_trip_tolerance\\\": 1e-17}}\"") == 1);
    }
    SUBCASE("reduce and apply agree through files") {
        // build a small amplitude, reduce it via the CLI, apply both forms
        GridSpec g3(3, 16, g.step);
        SampledField a(g3);
        Rng rng(9);
        std::vector<int> idx(3);
        GridSpec dual = g.dual();
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            unflatten(i, 3, g3.n, idx);
            double x = g3.coord(idx[0]), y = g3.coord(idx[1]), z = dual.coord(idx[2]);
            a.values[i] = std::exp(-0.5 * (x * x + y * y + z * z));
        }
        std::string amp = temp_path("cli_amp.msf"), sym = temp_path("cli_sym.msf");
        std::string out1 = temp_path("cli_out1.msf"), out2 = temp_path("cli_out2.msf");
        write_field(a, amp);
        CHECK(run_cli("psdo-reduce " + amp + " -o " + sym) == 0);
        CHECK(run_cli("psdo-apply " + amp + " " + field_path + " -o " + out1) == 0);
        CHECK(run_cli("psdo-apply " + sym + " " + field_path + " -o " + out2) == 0);
        SampledField r1 = read_field(out1), r2 = read_field(out2);
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < r1.values.size(); ++i) {
            err = std::max(err, std::abs(r1.values[i] - r2.values[i]));
            scale = std::max(scale, std::abs(r1.values[i]));
        }
        CHECK(err <= 1e-10 * scale);
    }
    SUBCASE("schatten prints the operator norm family") {
        GridSpec g2(2, 16, g.step);
        SampledField one(g2);
        for (auto& v : one.values) v = 1.0;
        std::string sym = temp_path("cli_one.msf");
        write_field(one, sym);
        // identity operator: I_2 = sqrt(16) = 4
        CHECK(run_cli("schatten " + sym + " -p 2") == 0);
    }
}
