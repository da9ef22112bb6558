#pragma once

#include "abp/abp.hpp"

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace abp::io {

using json = nlohmann::json;

/// Integral doubles are written as integers: 0.0 prints as 0.
inline json number(double x) {
    if (std::isfinite(x) && x == std::trunc(x) && std::abs(x) < 9007199254740992.0)
        return static_cast<std::int64_t>(x);
    return x;
}

inline json to_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

inline cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(ErrorCode::InvalidArgument, "complex numbers are written as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const std::vector<cplx>& pts) {
    json out = json::array();
    for (const auto& z : pts) out.push_back(to_json(z));
    return out;
}

inline json to_json(const Divisor& d) {
    return to_json(std::vector<cplx>(d.points().begin(), d.points().end()));
}

inline std::vector<cplx> complex_list_from_json(const json& j) {
    if (!j.is_array()) fail(ErrorCode::InvalidArgument, "expected an array of [re, im] pairs");
    std::vector<cplx> out;
    for (const auto& z : j) out.push_back(complex_from_json(z));
    return out;
}

inline json to_json(const AnnulusProperMap& f) {
    return {{"r", number(f.r())},
            {"delta", f.delta()},
            {"zeros", to_json(f.zeros())},
            {"N", f.truncation()},
            {"tail_bound", number(f.tail_bound())}};
}

inline AnnulusProperMap map_from_json(const json& j) {
    try {
        return AnnulusProperMap::from_parts(j.at("r").get<double>(), j.at("delta").get<int>(),
                                            Divisor(complex_list_from_json(j.at("zeros"))), j.at("N").get<int>(),
                                            j.at("tail_bound").get<double>());
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed map JSON: ") + e.what());
    }
}

inline json to_json(const VerificationReport& v) {
    return {{"boundary_deviation_outer", number(v.boundary_deviation_outer)},
            {"boundary_deviation_inner", number(v.boundary_deviation_inner)},
            {"modularity_defect", number(v.modularity_defect)},
            {"reflection_defect", number(v.reflection_defect)},
            {"truncation_gap", number(v.truncation_gap)},
            {"mid_circle_max_modulus", number(v.mid_circle_max_modulus)},
            {"winding", json::array({v.winding_inner, v.winding_outer})},
            {"eps", json::array({number(v.eps_inner), number(v.eps_outer)})},
            {"samples", v.samples},
            {"seed", v.seed}};
}

inline json to_json(const CircleDomain& d) {
    auto circle = [](const Circle& c) { return json{{"c", to_json(c.center)}, {"r", number(c.radius)}}; };
    json inner = json::array();
    for (const auto& c : d.inner) inner.push_back(circle(c));
    return {{"outer", circle(d.outer)}, {"inner", inner}, {"degrees", d.degrees}};
}

inline CircleDomain domain_from_json(const json& j) {
    try {
        auto circle = [](const json& c) { return Circle{complex_from_json(c.at("c")), c.at("r").get<double>()}; };
        CircleDomain d;
        d.outer = circle(j.at("outer"));
        for (const auto& c : j.at("inner")) d.inner.push_back(circle(c));
        d.degrees = j.at("degrees").get<std::vector<int>>();
        d.validate();
        return d;
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed circle domain JSON: ") + e.what());
    }
}

inline json to_json(const ModelCoordinates& m) {
    return {{"t", number(m.t)}, {"c", to_json(m.c)}, {"phase", to_json(m.phase)}};
}

inline json to_json(const AbelReport& a) {
    json sums = json::array(), residuals = json::array();
    for (double s : a.sums) sums.push_back(number(s));
    for (double s : a.residuals) residuals.push_back(number(s));
    return {{"sums", sums},
            {"targets", a.targets},
            {"residuals", residuals},
            {"pass", a.pass},
            {"ok", a.all_pass()},
            {"tolerance", number(a.tolerance)},
            {"solver_residual", number(a.solver_residual)}};
}

inline json to_json(const ClassificationReport& r) {
    auto interval = [](const RadialInterval& a) { return json::array({number(a.inner), number(a.outer)}); };
    json annuli = json::array(), moduli = json::array();
    for (const auto& a : r.annuli) annuli.push_back(interval(a));
    for (double m : r.moduli) moduli.push_back(number(m));
    return {{"is_cantor_circle", r.is_cantor_circle},
            {"n", r.n},
            {"degrees", r.degrees},
            {"central", interval(r.central)},
            {"annuli", annuli},
            {"moduli", moduli},
            {"scheme_type", to_string(r.scheme_type_after_normalization)},
            {"normalization", "conjugated by 1/z"},
            {"ray_spread", number(r.ray_spread)},
            {"critical_escape_steps", r.critical_escape_steps}};
}

inline json to_json(const GrotzschDiagnostic& g) {
    return {{"central_modulus", number(g.central_modulus)},
            {"sum_of_moduli", number(g.sum_of_moduli)},
            {"margin", number(g.margin)},
            {"pass", g.pass}};
}

} // namespace abp::io
