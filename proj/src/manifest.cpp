#include "modspace/manifest.hpp"

#include <json.hpp>

#include "modspace/psdo.hpp"

namespace modspace {

namespace {

double parse_exponent(const nlohmann::json& j) {
    if (j.is_string()) {
        require(j.get<std::string>() == "inf", ErrorCode::bad_argument,
                "exponent strings must be \"inf\"");
        return inf_exponent;
    }
    require(j.is_number(), ErrorCode::bad_argument, "exponent must be a number or \"inf\"");
    double v = j.get<double>();
    require(v > 0.0, ErrorCode::bad_argument, "exponents must be positive");
    return v;
}

std::vector<double> parse_exponent_list(const nlohmann::json& j) {
    std::vector<double> out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(parse_exponent(e));
    } else {
        out.push_back(parse_exponent(j));
    }
    return out;
}

std::vector<double> broadcast(std::vector<double> v, int count) {
    if (static_cast<int>(v.size()) == 1 && count > 1) v.assign(count, v[0]);
    require(static_cast<int>(v.size()) == count, ErrorCode::bad_argument,
            "exponent count does not match the grid blocks");
    return v;
}

} // namespace

NormRequest parse_norm_request(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    require(!j.is_discarded() && j.is_object(), ErrorCode::bad_argument, "norm manifest does not parse");

    NormRequest req;
    const std::string kind = j.value("kind", std::string("modulation"));
    if (kind == "modulation")
        req.kind = NormRequest::Kind::modulation;
    else if (kind == "amplitude")
        req.kind = NormRequest::Kind::amplitude;
    else
        fail(ErrorCode::bad_argument, "unknown norm kind: " + kind);

    require(j.contains("p") && j.contains("q"), ErrorCode::bad_argument, "manifest needs p and q");
    req.p = parse_exponent_list(j.at("p"));
    req.q = parse_exponent_list(j.at("q"));

    const std::string flavor = j.value("flavor", std::string("M"));
    require(flavor == "M" || flavor == "W", ErrorCode::bad_argument, "flavor must be M or W");
    req.flavor = flavor == "M" ? ModulationFlavor::M : ModulationFlavor::W;

    if (j.contains("weight")) req.weight = Weight::from_json(j.at("weight").dump());
    req.a_step = j.value("a_step", 1);
    req.b_step = j.value("b_step", 1);
    require(req.a_step >= 1 && req.b_step >= 1, ErrorCode::bad_argument, "strides must be positive");
    return req;
}

double compute_norm(const SampledField& f, const NormRequest& req) {
    if (req.kind == NormRequest::Kind::modulation) {
        const int d = f.grid.dim;
        Window phi = gaussian_window(f.grid);
        return modulation_norm(f, phi, broadcast(req.p, d), broadcast(req.q, d), req.weight, req.flavor,
                               req.a_step, req.b_step);
    }
    require(f.grid.dim % 3 == 0, ErrorCode::bad_argument, "amplitude norms need a 3d-axis field");
    std::vector<double> p = broadcast(req.p, 3), q = broadcast(req.q, 3);
    Window phi3 = gaussian_window(f.grid);
    return amplitude_mod_norm(f, phi3, {p[0], p[1], p[2]}, {q[0], q[1], q[2]}, req.weight, req.flavor,
                              req.a_step, req.b_step);
}

} // namespace modspace
