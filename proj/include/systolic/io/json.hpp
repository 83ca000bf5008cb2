#pragma once

#include <json.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/certify/certificate.hpp"
#include "systolic/diskmap/disk_map.hpp"
#include "systolic/diskmap/one_form.hpp"
#include "systolic/diskmap/periodic_points.hpp"
#include "systolic/numerics/quadrature.hpp"
#include "systolic/numerics/radial_function.hpp"
#include "systolic/plug/plug.hpp"
#include "systolic/plug/verify.hpp"
#include "systolic/profile/profile.hpp"
#include "systolic/rotorus/orbits.hpp"
#include "systolic/rotorus/rot_form.hpp"
#include "systolic/rotorus/volume.hpp"

namespace systolic::io {

using Json = nlohmann::ordered_json;
using numerics::RadialFunction;

/// Malformed input: wrong type, missing or unknown key. Maps to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw InputError(where + ": unknown key '" + k + "'");
    }
}

inline const Json& need(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw InputError(where + ": missing key '" + key + "'");
    return j.at(key);
}

inline double number(const Json& j, const char* key, const std::string& where) {
    const auto& v = need(j, key, where);
    if (!v.is_number()) throw InputError(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

inline double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

inline int integer(const Json& j, const char* key, const std::string& where) {
    const auto& v = need(j, key, where);
    if (!v.is_number_integer()) throw InputError(where + ": '" + key + "' must be an integer");
    return v.get<int>();
}

inline std::vector<double> numbers(const Json& j, const char* key, const std::string& where) {
    const auto& v = need(j, key, where);
    if (!v.is_array()) throw InputError(where + ": '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw InputError(where + ": '" + key + "' must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

inline certify::Rational rational(const Json& v, const std::string& where) {
    try {
        if (v.is_string()) return certify::parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return certify::Rational(v.get<long long>());
        if (v.is_number()) return certify::decimal_rational(v.get<double>());
    } catch (const std::invalid_argument& e) {
        throw InputError(where + ": " + e.what());
    }
    throw InputError(where + ": expected a number or a rational string");
}

/// Rethrows construction errors of library types as input errors.
template <class F>
auto build(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw InputError(where + ": " + e.what());
    }
}

}  // namespace detail

// ---- radial functions

/**
 * Three accepted shapes: Hermite knot data {knots, values, d1, d2?}, exact
 * pieces {knots, pieces} in local monomials, or a named family
 * (constant, polynomial, bump_power). `parity` defaults to none.
 */
inline RadialFunction radial_function_from_json(const Json& j, const std::string& where = "radial function") {
    using detail::need;
    if (!j.is_object()) throw InputError(where + ": expected an object");
    if (j.contains("family")) {
        const auto fam = need(j, "family", where).get<std::string>();
        if (fam == "constant") {
            detail::only_keys(j, {"family", "value", "r_max"}, where);
            return detail::build(where, [&] {
                return RadialFunction::constant(detail::number(j, "value", where), detail::number(j, "r_max", where));
            });
        }
        if (fam == "polynomial") {
            detail::only_keys(j, {"family", "coeffs", "r_max", "parity"}, where);
            return detail::build(where, [&] {
                const auto par = numerics::parity_from_string(j.value("parity", std::string("none")));
                return RadialFunction::polynomial(detail::numbers(j, "coeffs", where), detail::number(j, "r_max", where),
                                                  par);
            });
        }
        if (fam == "bump_power") {
            detail::only_keys(j, {"family", "amplitude", "support", "power"}, where);
            return detail::build(where, [&] {
                return RadialFunction::bump_power(detail::number(j, "amplitude", where),
                                                  detail::number(j, "support", where),
                                                  detail::integer(j, "power", where));
            });
        }
        throw InputError(where + ": unknown family '" + fam + "'");
    }
    return detail::build(where, [&] {
        const auto par = numerics::parity_from_string(j.value("parity", std::string("none")));
        if (j.contains("pieces")) {
            detail::only_keys(j, {"knots", "pieces", "parity"}, where);
            std::vector<std::vector<double>> pieces;
            for (const auto& p : need(j, "pieces", where)) pieces.push_back(p.get<std::vector<double>>());
            return RadialFunction::from_pieces(detail::numbers(j, "knots", where), std::move(pieces), par);
        }
        detail::only_keys(j, {"knots", "values", "d1", "d2", "parity"}, where);
        std::optional<std::vector<double>> d2;
        if (j.contains("d2")) d2 = detail::numbers(j, "d2", where);
        return RadialFunction(detail::numbers(j, "knots", where), detail::numbers(j, "values", where),
                              detail::numbers(j, "d1", where), std::move(d2), par);
    });
}

inline Json to_json(const RadialFunction& f) {
    Json j;
    j["knots"] = f.knots();
    if (f.is_hermite()) {
        j["values"] = f.values();
        j["d1"] = f.first_derivatives();
        if (f.second_derivatives()) j["d2"] = *f.second_derivatives();
    } else {
        j["pieces"] = f.pieces();
    }
    j["parity"] = std::string(numerics::to_string(f.parity()));
    return j;
}

// ---- disk maps

inline disk::DiskMap disk_map_from_json(const Json& j, const std::string& where = "map") {
    detail::only_keys(j, {"radius", "primitives"}, where);
    const double R = detail::number(j, "radius", where);
    std::vector<disk::Primitive> prims;
    if (j.contains("primitives")) {
        std::size_t i = 0;
        for (const auto& p : j.at("primitives")) {
            const std::string w = where + ".primitives[" + std::to_string(i++) + "]";
            const auto type = detail::need(p, "type", w).get<std::string>();
            if (type == "twist") {
                detail::only_keys(p, {"type", "profile", "support"}, w);
                auto prof = radial_function_from_json(detail::need(p, "profile", w), w + ".profile");
                const double s = detail::number_or(p, "support", std::min(R, prof.support_radius()), w);
                prims.emplace_back(disk::RadialTwist{std::move(prof), s});
            } else if (type == "hamiltonian") {
                detail::only_keys(p, {"type", "time", "steps_per_unit_time", "terms"}, w);
                disk::HamiltonianStep h;
                h.time = detail::number(p, "time", w);
                if (p.contains("steps_per_unit_time")) h.steps_per_unit_time = detail::integer(p, "steps_per_unit_time", w);
                std::size_t k = 0;
                for (const auto& t : detail::need(p, "terms", w)) {
                    const std::string wt = w + ".terms[" + std::to_string(k++) + "]";
                    detail::only_keys(t, {"bump", "m", "a", "b"}, wt);
                    h.terms.push_back({radial_function_from_json(detail::need(t, "bump", wt), wt + ".bump"),
                                       detail::integer(t, "m", wt), detail::number_or(t, "a", 0.0, wt),
                                       detail::number_or(t, "b", 0.0, wt)});
                }
                prims.emplace_back(std::move(h));
            } else {
                throw InputError(w + ": unknown primitive type '" + type + "'");
            }
        }
    }
    return detail::build(where, [&] { return disk::DiskMap(R, std::move(prims)); });
}

inline Json to_json(const disk::DiskMap& m) {
    Json j;
    j["radius"] = m.radius();
    Json prims = Json::array();
    for (const auto& p : m.primitives()) {
        Json e;
        if (const auto* tw = std::get_if<disk::RadialTwist>(&p)) {
            e["type"] = "twist";
            e["profile"] = to_json(tw->profile);
            e["support"] = tw->support;
        } else {
            const auto& h = std::get<disk::HamiltonianStep>(p);
            e["type"] = "hamiltonian";
            e["time"] = h.time;
            e["steps_per_unit_time"] = h.steps_per_unit_time;
            Json terms = Json::array();
            for (const auto& t : h.terms) terms.push_back({{"bump", to_json(t.bump)}, {"m", t.m}, {"a", t.a}, {"b", t.b}});
            e["terms"] = terms;
        }
        prims.push_back(e);
    }
    j["primitives"] = prims;
    return j;
}

inline disk::PrimitiveOneForm one_form_from_json(const Json& j, const std::string& where = "lambda") {
    detail::only_keys(j, {"terms", "envelope"}, where);
    std::vector<disk::Monomial> terms;
    if (j.contains("terms")) {
        std::size_t k = 0;
        for (const auto& t : j.at("terms")) {
            const std::string w = where + ".terms[" + std::to_string(k++) + "]";
            detail::only_keys(t, {"i", "j", "coef"}, w);
            terms.push_back({detail::integer(t, "i", w), detail::integer(t, "j", w), detail::number(t, "coef", w)});
        }
    }
    std::optional<RadialFunction> env;
    if (j.contains("envelope")) env = radial_function_from_json(j.at("envelope"), where + ".envelope");
    return detail::build(where, [&] { return disk::PrimitiveOneForm(std::move(terms), std::move(env)); });
}

// ---- rotational forms

inline rotorus::RotForm rot_form_from_json(const Json& j, const std::string& where = "form") {
    detail::only_keys(j, {"R", "core_period", "kappa", "c", "d"}, where);
    auto c = radial_function_from_json(detail::need(j, "c", where), where + ".c");
    auto d = radial_function_from_json(detail::need(j, "d", where), where + ".d");
    return detail::build(where, [&] {
        return rotorus::RotForm(detail::number(j, "R", where), detail::number(j, "core_period", where),
                                detail::number(j, "kappa", where), std::move(c), std::move(d));
    });
}

inline Json to_json(const rotorus::RotForm& f) {
    return {{"R", f.radius()}, {"core_period", f.core_period()}, {"kappa", f.kappa()}, {"c", to_json(f.c())},
            {"d", to_json(f.d())}};
}

// ---- profiles

inline profile::ProfileParams profile_params_from_json(const Json& j, const std::string& where = "params") {
    detail::only_keys(j, {"s", "delta", "rho", "r0", "r1"}, where);
    profile::ProfileParams p{detail::number(j, "s", where), detail::number(j, "delta", where),
                             detail::number(j, "rho", where), detail::number(j, "r0", where),
                             detail::number(j, "r1", where)};
    detail::build(where, [&] {
        p.validate();
        return 0;
    });
    return p;
}

inline Json to_json(const profile::ProfileParams& p) {
    return {{"s", p.s}, {"delta", p.delta}, {"rho", p.rho}, {"r0", p.r0}, {"r1", p.r1}};
}

inline profile::ProfileCurve profile_curve_from_json(const Json& j, const std::string& where = "curve") {
    detail::only_keys(j, {"params", "f", "g"}, where);
    return {radial_function_from_json(detail::need(j, "f", where), where + ".f"),
            radial_function_from_json(detail::need(j, "g", where), where + ".g"),
            profile_params_from_json(detail::need(j, "params", where), where + ".params")};
}

inline Json to_json(const profile::ProfileCurve& c) {
    return {{"params", to_json(c.params)}, {"f", to_json(c.f)}, {"g", to_json(c.g)}};
}

inline Json to_json(const profile::ProfileReport& r) {
    Json conds = Json::array();
    for (const auto& c : r.conditions)
        conds.push_back({{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"witness_r", c.witness_r},
                         {"detail", c.detail}});
    return {{"all_pass", r.all_pass()}, {"grid", r.grid}, {"gap", r.gap}, {"conditions", conds}};
}

inline Json to_json(const profile::TauReport& t) {
    return {{"tau_min", t.tau_min},           {"tau_max", t.tau_max}, {"max_slope", t.max_slope},
            {"sup_deviation", t.sup_deviation}, {"bound", t.bound},     {"monotone", t.monotone},
            {"within_bounds", t.within_bounds}};
}

// ---- numerics results

inline Json to_json(const numerics::Integral& i) {
    return {{"value", i.value}, {"error", i.error}, {"converged", i.converged}, {"evaluations", i.evaluations}};
}

inline Json to_json(const numerics::QuadratureSpec& s) {
    return {{"abs_tol", s.abs_tol}, {"rel_tol", s.rel_tol}, {"max_subdivisions", s.max_subdivisions}};
}

inline Json to_json(numerics::Vec2 z) { return Json::array({z.x, z.y}); }

// ---- rotorus results

inline Json to_json(const rotorus::OrbitScan& s) {
    return {{"t_max", s.t_max}, {"q_max", s.q_max}, {"grid", s.grid}};
}

inline Json to_json(const rotorus::OrbitRecord& o) {
    return {{"kind", std::string(rotorus::to_string(o.kind))},
            {"r", o.r},
            {"r_end", o.r_end},
            {"p", o.p},
            {"q", o.q},
            {"T", o.period},
            {"closure_error", o.closure_error}};
}

inline Json to_json(const rotorus::OrbitEnumeration& e) {
    Json orbits = Json::array();
    for (const auto& o : e.orbits) orbits.push_back(to_json(o));
    return {{"scan", to_json(e.scan)}, {"heuristic", true}, {"orbits", orbits}, {"warnings", e.warnings}};
}

inline Json to_json(const rotorus::VolumeReport& v) {
    return {{"radial", to_json(v.radial)},
            {"section", to_json(v.section)},
            {"section_used", std::string(rotorus::to_string(v.section_used))},
            {"cartesian", to_json(v.cartesian)},
            {"spread", v.spread},
            {"converged", v.converged()}};
}

// ---- disk and plug results

inline Json to_json(const disk::PeriodicSearch& s) {
    return {{"k_max", s.k_max}, {"rings", s.rings}, {"accept_residual", s.accept_residual}, {"max_newton", s.max_newton}};
}

inline Json to_json(const disk::PeriodicOrbit& o) {
    Json pts = Json::array();
    for (const auto& z : o.orbit) pts.push_back(to_json(z));
    return {{"point", to_json(o.point)},   {"period", o.period},     {"kind", disk::to_string(o.kind)},
            {"action_sum", o.action_sum}, {"residual", o.residual}, {"orbit", pts}};
}

inline Json to_json(const plug::AxiomResult& a) {
    Json j{{"name", a.name}, {"pass", a.pass}, {"margin", a.margin}};
    j["witness"] = a.witness ? to_json(*a.witness) : Json(nullptr);
    j["note"] = a.note;
    return j;
}

inline Json to_json(const plug::PlugReport& r) {
    Json axioms = Json::array();
    for (const auto& a : r.axioms) axioms.push_back(to_json(a));
    Json j{{"all_pass", r.all_pass()}, {"axioms", axioms}};
    if (r.n > 0) j["n"] = r.n;
    j["search"] = to_json(r.search);
    j["min_search"] = {{"rings", r.min_search.rings}, {"step_tol", r.min_search.step_tol}};
    j["observed_tmin"] = std::isfinite(r.observed_tmin) ? Json(r.observed_tmin) : Json(nullptr);
    j["volume"] = r.volume;
    j["calabi"] = r.calabi;
    j["warnings"] = r.warnings;
    return j;
}

/// {"L": ..., "radius": ..., "map": DiskMap}; the map's radius defaults to the plug radius.
struct PlugSpec {
    double L = 1.0;
    disk::DiskMap map;
};

inline PlugSpec plug_spec_from_json(const Json& j, const std::string& where = "plug") {
    detail::only_keys(j, {"L", "radius", "map"}, where);
    const double L = detail::number(j, "L", where);
    Json m = detail::need(j, "map", where);
    if (j.contains("radius")) {
        const double r = detail::number(j, "radius", where);
        if (!m.contains("radius")) m["radius"] = r;
        else if (detail::number(m, "radius", where + ".map") != r)
            throw InputError(where + ": radius and map.radius disagree");
    }
    return {L, disk_map_from_json(m, where + ".map")};
}

inline Json to_json(const PlugSpec& p) {
    return {{"L", p.L}, {"radius", p.map.radius()}, {"map", to_json(p.map)}};
}

// ---- certificates

inline Json rational_json(const certify::Rational& r) {
    return {{"exact", certify::to_string(r)}, {"decimal", certify::to_double(r)}};
}

inline certify::AssemblyInput assembly_from_json(const Json& j, const std::string& where = "assembly") {
    detail::only_keys(j, {"ell", "eps", "areas", "tau_deviation", "plugs"}, where);
    certify::AssemblyInput in;
    in.ell = detail::integer(j, "ell", where);
    in.eps = detail::rational(detail::need(j, "eps", where), where + ".eps");
    for (const auto& a : detail::need(j, "areas", where)) in.areas.push_back(detail::rational(a, where + ".areas"));
    in.tau_deviation = detail::rational(detail::need(j, "tau_deviation", where), where + ".tau_deviation");
    std::size_t k = 0;
    for (const auto& p : detail::need(j, "plugs", where)) {
        const std::string w = where + ".plugs[" + std::to_string(k++) + "]";
        certify::PlugComponent c;
        const auto src = detail::need(p, "source", w).get<std::string>();
        if (src == "hypothesis") {
            detail::only_keys(p, {"source", "label"}, w);
            c.source = certify::PlugSource::hypothesis;
        } else if (src == "report") {
            detail::only_keys(p, {"source", "label", "volume", "volume_error", "observed_tmin", "a3", "a4"}, w);
            c.source = certify::PlugSource::report;
            c.volume = detail::number(p, "volume", w);
            c.volume_error = detail::number_or(p, "volume_error", 0.0, w);
            c.observed_tmin = detail::number(p, "observed_tmin", w);
            c.a3 = detail::need(p, "a3", w).get<bool>();
            c.a4 = detail::need(p, "a4", w).get<bool>();
        } else {
            throw InputError(w + ": source must be 'report' or 'hypothesis'");
        }
        c.label = p.value("label", std::string());
        in.plugs.push_back(std::move(c));
    }
    try {
        in.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return in;
}

inline Json to_json(const certify::Trace& t) {
    Json out = Json::array();
    for (const auto& s : t) {
        Json j{{"name", s.name}, {"statement", s.statement}};
        j["lhs"] = s.lhs ? rational_json(*s.lhs) : Json(nullptr);
        j["relation"] = certify::to_string(s.relation);
        j["rhs"] = rational_json(s.rhs);
        j["holds"] = s.holds();
        j["assumed"] = s.assumed();
        j["provenance"] = s.provenance;
        out.push_back(j);
    }
    return out;
}

inline Json to_json(const certify::Certificate& c) {
    Json comps = Json::array();
    for (const auto& t : c.tmin_components)
        comps.push_back({{"name", t.name}, {"bound", rational_json(t.bound)}, {"provenance", t.provenance}});
    return {{"certified", true},
            {"conditional", c.conditional},
            {"ell", c.ell},
            {"eps", rational_json(c.eps)},
            {"radii", c.radii},
            {"ambient_volume_bound", rational_json(c.ambient_bound)},
            {"complement_volume_bound", rational_json(c.complement_bound)},
            {"total_volume_bound", rational_json(c.total_bound)},
            {"tmin_bound", rational_json(c.tmin_bound)},
            {"tmin_components", comps},
            {"systolic_ratio_bound", rational_json(c.ratio_bound)},
            {"reverified", c.reverify()},
            {"trace", to_json(c.trace)}};
}

inline Json to_json(const certify::CertificateRefused& r) {
    return {{"certified", false}, {"failed_inequality", r.inequality}, {"trace", to_json(r.trace)}};
}

inline Json to_json(const certify::Sweep& s) {
    Json rows = Json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"eps", rational_json(r.eps)},
                        {"systolic_ratio_bound", rational_json(r.certificate.ratio_bound)},
                        {"reverified", r.certificate.reverify()}});
    return {{"ell", s.ell}, {"strictly_increasing", s.strictly_increasing}, {"rows", rows}};
}

}  // namespace systolic::io
