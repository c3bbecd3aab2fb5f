#ifndef MODSPACE_VERIFY_HPP
#define MODSPACE_VERIFY_HPP

#include <string>
#include <utility>
#include <vector>

namespace modspace {

// Verification suites:
//   young    - weighted Young inequality, exponential-kernel convolution,
//              mixed-norm oracle equivalence and quasi-norm axioms
//   moyal    - Moyal identity and the Gabor frame round trip
//   trace    - STFT trace identity and the trace boundedness experiment
//   reduce   - amplitude -> Kohn-Nirenberg reduction and extension
//   transfer - quantization transfer calculus
//   schatten - singular-value basics and the Schatten bound experiment
//   all      - everything above
//
// Each criterion carries its tolerance in code; the optional manifest JSON
// overrides sizes, seeds and tolerances per criterion, e.g.
//   { "reduce": { "round_trip_tolerance": 1e-14 } }
// Reports are reproducible byte-identically for a fixed (suite, manifest)
// in deterministic mode, independent of the thread count.

struct VerifyOptions {
    bool deterministic = false;
    int threads = 0; // 0: MODSPACE_THREADS or hardware
};

struct VerifyResult {
    bool all_pass = false;
    std::string report_json;
    std::vector<std::pair<std::string, bool>> criteria;
};

const std::vector<std::string>& verify_suite_names();

VerifyResult run_verify(const std::string& suite, const std::string& manifest_json,
                        const VerifyOptions& options);

} // namespace modspace

#endif
