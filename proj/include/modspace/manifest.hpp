#ifndef MODSPACE_MANIFEST_HPP
#define MODSPACE_MANIFEST_HPP

#include <string>
#include <vector>

#include "modspace/gabor.hpp"
#include "modspace/grid.hpp"
#include "modspace/weight.hpp"

namespace modspace {

// JSON description of one norm evaluation, used by the norm subcommand:
//
//   {
//     "kind": "modulation" | "amplitude",
//     "p": 2.0 | [..] | "inf",        (block exponents for amplitude kind)
//     "q": 2.0 | [..] | "inf",
//     "flavor": "M" | "W",
//     "weight": { weight tree },       (optional, default 1)
//     "a_step": 1, "b_step": 1         (optional)
//   }
//
// Exponents appear as positive numbers or the string "inf".
struct NormRequest {
    enum class Kind { modulation, amplitude } kind = Kind::modulation;
    std::vector<double> p, q;
    ModulationFlavor flavor = ModulationFlavor::M;
    Weight weight;
    int a_step = 1;
    int b_step = 1;
};

NormRequest parse_norm_request(const std::string& json_text);
double compute_norm(const SampledField& f, const NormRequest& req);

} // namespace modspace

#endif
