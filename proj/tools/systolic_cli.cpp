#include <CLI11.hpp>

#include <array>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "systolic/systolic.hpp"

namespace fs = std::filesystem;
using namespace systolic;
using io::Json;

namespace {

struct Common {
    std::optional<double> tol;
    std::optional<int> kmax;
    std::optional<int> qmax;
    std::optional<std::size_t> grid;
    std::string out;
    std::string format = "json";
};

struct Artifact {
    std::string name;
    std::string content;
};

/// What a command produced. `failure` set means exit 1, but everything is still emitted.
struct Outcome {
    Json doc;
    std::vector<Artifact> files;
    std::optional<std::string> failure;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json load(const std::string& path) {
    try {
        return Json::parse(io::read_file(path));
    } catch (const Json::parse_error& e) {
        throw io::InputError(path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw io::InputError(e.what());
    }
}

numerics::QuadratureSpec quadrature(const Common& c, numerics::QuadratureSpec fallback) {
    if (c.tol) {
        if (!(*c.tol > 0.0)) throw io::InputError("--tol must be positive");
        fallback.abs_tol = fallback.rel_tol = *c.tol;
    }
    return fallback;
}

disk::PeriodicSearch periodic_search(const Common& c) {
    disk::PeriodicSearch s;
    if (c.kmax) s.k_max = *c.kmax;
    return s;
}

Json spec_context(const numerics::QuadratureSpec& s) { return io::to_json(s); }

// ---- profile

Outcome profile_outputs(const profile::ProfileCurve& curve, const Common& c, Json context) {
    const std::size_t grid = c.grid.value_or(10'000);
    Outcome o;
    const auto rep = profile::verify_profile(curve, grid);
    context["grid"] = grid;
    o.doc["context"] = context;
    o.doc["curve"] = io::to_json(curve);
    o.doc["report"] = io::to_json(rep);
    o.files.push_back({"profile_curve.json", dump(io::to_json(curve))});
    o.files.push_back({"profile_report.json", dump(io::to_json(rep))});
    o.files.push_back({"gamma.svg", io::render_svg(io::gamma_plot(curve))});
    if (const auto* bad = rep.first_failure()) {
        o.failure = bad->name + " fails at r = " + io::format_number(bad->witness_r) + " (margin " +
                    io::format_number(bad->margin) + ")";
        return o;
    }
    const profile::TauProfile tau(curve);
    const auto tr = profile::tau_report(tau, grid);
    o.doc["tau"] = io::to_json(tr);
    o.files.push_back({"tau_report.json", dump(io::to_json(tr))});
    o.files.push_back({"tau.svg", io::render_svg(io::tau_plot(tau))});
    if (!tr.monotone) o.failure = "return time is not monotone (max slope " + io::format_number(tr.max_slope) + ")";
    else if (!tr.within_bounds) o.failure = "return time leaves [1/(1+delta), 1]";
    return o;
}

Outcome profile_design(const profile::ProfileParams& p, const Common& c) {
    try {
        const auto curve = profile::design_profile(p);
        return profile_outputs(curve, c, {{"params", io::to_json(p)}});
    } catch (const std::domain_error& e) {
        Outcome o;
        o.doc = {{"params", io::to_json(p)}, {"feasible", false}, {"reason", e.what()}};
        o.failure = e.what();
        return o;
    }
}

// ---- rotorus

Json form_summary(const rotorus::RotForm& form, std::size_t grid) {
    Json samples = Json::array();
    for (std::size_t i = 0; i <= grid; ++i) {
        const double r = form.radius() * static_cast<double>(i) / static_cast<double>(grid);
        const auto v = form.velocities(r);
        samples.push_back({{"r", r}, {"W", form.wronskian(r)}, {"disk_velocity", v.disk}, {"core_velocity", v.core}});
    }
    Json sections = Json::array();
    for (auto s : {rotorus::Section::core_angle, rotorus::Section::disk_angle}) {
        Json e{{"section", std::string(rotorus::to_string(s))}};
        try {
            const rotorus::ReturnSystem rs(form, s);
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i = 0; i <= grid; ++i) {
                const double t = rs.return_time(form.radius() * static_cast<double>(i) / static_cast<double>(grid));
                lo = std::min(lo, t), hi = std::max(hi, t);
            }
            e["transverse"] = true;
            e["return_time_min"] = lo;
            e["return_time_max"] = hi;
            e["area"] = rs.area(0.0, form.radius());
        } catch (const std::domain_error& err) {
            e["transverse"] = false;
            e["reason"] = err.what();
        }
        sections.push_back(e);
    }
    return {{"core_orbit_period", form.core_orbit_period()}, {"sections", sections}, {"samples", samples}};
}

rotorus::OrbitScan orbit_scan(const Common& c, double t_max) {
    rotorus::OrbitScan s;
    s.t_max = t_max;
    if (c.qmax) s.q_max = *c.qmax;
    if (c.grid) s.grid = *c.grid;
    return s;
}

Outcome orbit_outputs(const rotorus::RotForm& form, const rotorus::OrbitScan& scan) {
    const auto e = rotorus::orbit_enumerate(form, scan);
    Outcome o;
    o.doc = io::to_json(e);
    o.files.push_back({"orbits.json", dump(o.doc)});
    o.files.push_back({"orbits.csv", io::orbits_csv(e)});
    o.files.push_back({"orbits.svg", io::render_svg(io::orbit_plot(e))});
    return o;
}

Outcome rotorus_volume(const rotorus::RotForm& form, const Common& c) {
    rotorus::VolumeReport v;
    const auto radial = quadrature(c, {1e-12, 1e-12, 4000});
    const auto cart = quadrature(c, {1e-11, 1e-11, 4000});
    v.radial = rotorus::volume_radial(form, radial);
    v.section = rotorus::volume_section(form, &v.section_used, radial);
    v.cartesian = rotorus::volume_cartesian(form, cart);
    const auto rel = [](double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); };
    v.spread = std::max({rel(v.radial.value, v.section.value), rel(v.radial.value, v.cartesian.value),
                         rel(v.section.value, v.cartesian.value)});
    Outcome o;
    o.doc = io::to_json(v);
    o.doc["context"] = {{"radial_and_section", spec_context(radial)}, {"cartesian", spec_context(cart)}};
    o.files.push_back({"volume.json", dump(o.doc)});
    o.files.push_back({"volume.txt", "volume radial=" + io::format_number(v.radial.value) +
                                         " section=" + io::format_number(v.section.value) +
                                         " cartesian=" + io::format_number(v.cartesian.value) +
                                         " spread=" + io::format_number(v.spread) + "\n"});
    if (!v.converged()) o.failure = "a volume quadrature did not converge";
    return o;
}

// ---- disk maps

Outcome disk_act(const disk::DiskMap& map, const disk::PrimitiveOneForm& lambda,
                 const std::vector<std::array<double, 2>>& points, const Common& c) {
    const auto spec = quadrature(c, disk::default_action_quadrature());
    const disk::ActionField af(map, lambda, spec);
    Outcome o;
    Json values = Json::array();
    for (const auto& p : points) {
        const numerics::Vec2 z{p[0], p[1]};
        if (numerics::norm(z) > map.radius()) throw io::InputError("point outside the disk");
        const auto i = af.evaluate(z);
        const auto second = af.evaluate_second_path(z);
        values.push_back({{"point", io::to_json(z)},
                          {"action", io::to_json(i)},
                          {"second_path", second.value},
                          {"path_difference", std::abs(i.value - second.value)}});
        if (!i.converged) o.failure = "action quadrature did not converge";
    }
    o.doc = {{"context", {{"quadrature", spec_context(spec)}}}, {"values", values}};
    o.files.push_back({"action.json", dump(o.doc)});
    return o;
}

Outcome disk_cal(const disk::DiskMap& map, const disk::PrimitiveOneForm& lambda, bool direct, const Common& c) {
    const auto spec = quadrature(c, disk::default_action_quadrature());
    const disk::ActionField af(map, lambda, spec);
    const auto polar = af.calabi();
    Outcome o;
    o.doc = {{"context", {{"quadrature", spec_context(spec)}}}, {"calabi", io::to_json(polar)}};
    if (direct) {
        // one path integral per quadrature node: slow for Hamiltonian maps
        const auto d = af.calabi_direct();
        o.doc["calabi_direct"] = io::to_json(d);
        o.doc["difference"] = std::abs(polar.value - d.value);
    }
    o.files.push_back({"calabi.json", dump(o.doc)});
    if (!polar.converged) o.failure = "Calabi quadrature did not converge";
    return o;
}

Outcome disk_periodic(const disk::DiskMap& map, const disk::PrimitiveOneForm& lambda, const Common& c) {
    const auto search = periodic_search(c);
    const auto spec = quadrature(c, disk::default_action_quadrature());
    const disk::ActionField af(map, lambda, spec);
    Json orbits = Json::array();
    for (const auto& p : disk::periodic_points(map, search, &af)) orbits.push_back(io::to_json(p));
    Outcome o;
    o.doc = {{"context", {{"search", io::to_json(search)}, {"quadrature", spec_context(spec)}}},
             {"heuristic", true},
             {"orbits", orbits}};
    o.files.push_back({"periodic.json", dump(o.doc)});
    return o;
}

// ---- plugs

plug::PlugSystem build_plug(const io::PlugSpec& s) { return plug::make_plug(s.map, s.L); }

Json plug_summary(const plug::PlugSystem& p) {
    const auto& m = p.min_action();
    return {{"L", p.fiber_length()},
            {"radius", p.radius()},
            {"min_action", {{"point", io::to_json(m.point)}, {"value", m.value}}},
            {"min_return_time", p.fiber_length() + m.value},
            {"volume", io::to_json(p.volume())}};
}

/// Disk-map orbits have no rotation pair, so p is left empty; q is the number of returns.
std::string plug_orbits_csv(const std::vector<plug::PlugOrbit>& orbits) {
    std::string out = "kind,r,p,q,T\n";
    for (const auto& o : orbits)
        out += std::string(disk::to_string(o.orbit.kind)) + ',' + io::format_number(numerics::norm(o.orbit.point)) +
               ",," + std::to_string(o.orbit.period) + ',' + io::format_number(o.period) + '\n';
    return out;
}

Outcome plug_report_outcome(const plug::PlugReport& rep, const char* file) {
    Outcome o;
    o.doc = io::to_json(rep);
    o.files.push_back({file, dump(o.doc)});
    std::string msg;
    for (const auto& a : rep.axioms) {
        if (a.pass) continue;
        if (!msg.empty()) msg += "; ";
        msg += a.name + " fails (margin " + io::format_number(a.margin) + ")";
        if (a.witness) msg += " at (" + io::format_number(a.witness->x) + ", " + io::format_number(a.witness->y) + ")";
    }
    if (!msg.empty()) o.failure = msg;
    return o;
}

Outcome plug_volume(const io::PlugSpec& s, const Common& c) {
    const auto spec = quadrature(c, disk::default_action_quadrature());
    const plug::PlugSystem p(disk::DiskMap(s.map), s.L);
    const disk::ActionField af(s.map, {}, spec);
    const double base = s.L * numerics::pi * s.map.radius() * s.map.radius();
    auto formula = af.calabi();
    formula.value += base;
    auto direct = af.calabi_direct();
    direct.value += base;
    const auto tau_spec = quadrature(c, {1e-10, 1e-10, 4000});
    const auto tau = p.tau_integral(tau_spec);
    const auto rel = [](double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); };
    const double spread =
        std::max({rel(formula.value, direct.value), rel(formula.value, tau.value), rel(direct.value, tau.value)});
    Outcome o;
    o.doc = {{"context", {{"action_quadrature", spec_context(spec)}, {"tau_quadrature", spec_context(tau_spec)}}},
             {"area_term", base},
             {"calabi_polar", io::to_json(formula)},
             {"calabi_direct", io::to_json(direct)},
             {"tau_integral", io::to_json(tau)},
             {"spread", spread}};
    o.files.push_back({"plug_volume.json", dump(o.doc)});
    o.files.push_back({"plug_volume.txt", "volume calabi=" + io::format_number(formula.value) +
                                              " calabi_direct=" + io::format_number(direct.value) +
                                              " tau_integral=" + io::format_number(tau.value) +
                                              " spread=" + io::format_number(spread) + "\n"});
    if (!formula.converged || !direct.converged || !tau.converged) o.failure = "a volume quadrature did not converge";
    return o;
}

const disk::RadialTwist& single_twist(const io::PlugSpec& s) {
    const auto& prims = s.map.primitives();
    if (prims.size() != 1 || !std::holds_alternative<disk::RadialTwist>(prims.front()))
        throw io::InputError("plug realize: the map must be a single radial twist");
    return std::get<disk::RadialTwist>(prims.front());
}

// ---- certificates

Outcome certify_run(const certify::AssemblyInput& in) {
    Outcome o;
    try {
        const auto cert = certify::systolic_bound(in);
        o.doc = io::to_json(cert);
        o.files.push_back({"certificate.json", dump(o.doc)});
        o.files.push_back({"certificate.txt", certify::render_text(cert)});
        if (!cert.reverify()) o.failure = "certificate failed exact re-verification";
    } catch (const certify::CertificateRefused& r) {
        o.doc = io::to_json(r);
        o.files.push_back({"certificate.json", dump(o.doc)});
        o.files.push_back({"certificate.txt", certify::render_refusal(r)});
        o.failure = "refused at " + r.inequality;
    }
    return o;
}

Outcome certify_sweep(int ell, const std::vector<std::string>& eps_text) {
    std::vector<certify::Rational> eps;
    for (const auto& e : eps_text) eps.push_back(io::detail::rational(Json(e), "--eps"));
    Outcome o;
    try {
        const auto s = certify::sweep(ell, eps);
        o.doc = io::to_json(s);
        std::string text;
        for (const auto& row : s.rows)
            text += "eps " + certify::to_string(row.eps) + "  bound " + certify::to_string(row.certificate.ratio_bound) +
                    " ~ " + certify::decimal(row.certificate.ratio_bound) + "\n";
        text += std::string("strictly increasing: ") + (s.strictly_increasing ? "yes" : "no") + "\n";
        o.files.push_back({"sweep.json", dump(o.doc)});
        o.files.push_back({"sweep.txt", text});
        if (!s.strictly_increasing) o.failure = "bounds are not strictly increasing along the sequence";
    } catch (const certify::CertificateRefused& r) {
        o.doc = io::to_json(r);
        o.files.push_back({"sweep.json", dump(o.doc)});
        o.failure = "refused at " + r.inequality;
    }
    return o;
}

// ---- output

std::string extension(const std::string& format) { return format == "text" ? ".txt" : "." + format; }

int emit(const Outcome& o, const Common& c) {
    if (!c.out.empty()) {
        fs::create_directories(c.out);
        for (const auto& f : o.files) io::write_file_atomic(fs::path(c.out) / f.name, f.content);
        for (const auto& f : o.files) std::cout << "wrote " << (fs::path(c.out) / f.name).string() << "\n";
    } else if (c.format == "json") {
        std::cout << dump(o.doc);
    } else {
        const auto ext = extension(c.format);
        const Artifact* pick = nullptr;
        for (const auto& f : o.files)
            if (!pick && f.name.ends_with(ext)) pick = &f;
        if (!pick) throw io::InputError("--format " + c.format + " is not available for this command");
        std::cout << pick->content;
    }
    if (o.failure) {
        std::cerr << "check failed: " << *o.failure << "\n";
        return 1;
    }
    return 0;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--tol", c.tol, "quadrature tolerance (absolute and relative)");
    cmd->add_option("--kmax", c.kmax, "largest period in periodic-point searches");
    cmd->add_option("--qmax", c.qmax, "largest core winding in orbit enumeration");
    cmd->add_option("--grid", c.grid, "grid density for scans and checks");
    cmd->add_option("--out", c.out, "write every artifact into this directory");
    cmd->add_option("--format", c.format, "what to print when --out is absent")
        ->check(CLI::IsMember({"json", "csv", "svg", "text"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contact systolic toolkit: profiles, rotational forms, disk maps, plugs and certificates"};
    app.require_subcommand(1);
    Common common;
    std::function<Outcome()> run;

    std::string input, lambda_file;
    profile::ProfileParams params{};
    std::optional<std::string> params_file;
    double t_max = 10.0, eps = 0.0, factor = 1.0, L = 1.0, R = 1.0;
    int n = 2, ell = 1;
    bool direct_cal = false;
    std::vector<std::array<double, 2>> points;
    std::vector<std::string> eps_list;

    const auto leaf = [&](CLI::App* group, const char* name, const char* help) {
        auto* cmd = group->add_subcommand(name, help);
        add_common(cmd, common);
        return cmd;
    };
    const auto needs_input = [&](CLI::App* cmd, const char* what) {
        cmd->add_option("input", input, what)->required()->check(CLI::ExistingFile);
    };
    const auto load_form = [&] { return io::rot_form_from_json(load(input)); };
    const auto load_map = [&] { return io::disk_map_from_json(load(input)); };
    const auto load_lambda = [&] {
        return lambda_file.empty() ? disk::PrimitiveOneForm{} : io::one_form_from_json(load(lambda_file));
    };
    const auto load_plug = [&] { return io::plug_spec_from_json(load(input)); };

    // profile
    auto* prof = app.add_subcommand("profile", "design and verify profile curves");
    prof->require_subcommand(1);
    auto* design = leaf(prof, "design", "build a profile curve from its parameters");
    design->add_option("--params", params_file, "JSON file with s, delta, rho, r0, r1")->check(CLI::ExistingFile);
    auto* os = design->add_option("--s", params.s);
    design->add_option("--delta", params.delta)->needs(os);
    design->add_option("--rho", params.rho)->needs(os);
    design->add_option("--r0", params.r0)->needs(os);
    design->add_option("--r1", params.r1)->needs(os);
    design->callback([&] {
        run = [&] {
            auto p = params;
            if (params_file) p = io::profile_params_from_json(load(*params_file));
            else if (design->count("--s") == 0 || design->count("--delta") == 0 || design->count("--rho") == 0 ||
                     design->count("--r0") == 0 || design->count("--r1") == 0)
                throw io::InputError("profile design: give --params or all of --s --delta --rho --r0 --r1");
            else p.validate();
            return profile_design(p, common);
        };
    });
    auto* pverify = leaf(prof, "verify", "check a profile curve");
    needs_input(pverify, "ProfileCurve JSON");
    pverify->callback([&] {
        run = [&] { return profile_outputs(io::profile_curve_from_json(load(input)), common, Json::object()); };
    });

    // rotorus
    auto* rot = app.add_subcommand("rotorus", "rotationally symmetric contact forms on a solid torus");
    rot->require_subcommand(1);
    auto* analyze = leaf(rot, "analyze", "contact density, velocities and sections");
    needs_input(analyze, "RotForm JSON");
    analyze->callback([&] {
        run = [&] {
            const auto form = load_form();
            Outcome o;
            o.doc = {{"context", {{"grid", common.grid.value_or(20)}}},
                     {"form", io::to_json(form)},
                     {"analysis", form_summary(form, common.grid.value_or(20))}};
            o.files.push_back({"analysis.json", dump(o.doc)});
            o.files.push_back({"wronskian.svg", io::render_svg(io::wronskian_plot(form))});
            return o;
        };
    });
    auto* rorbits = leaf(rot, "orbits", "enumerate closed Reeb orbits up to a period cap");
    needs_input(rorbits, "RotForm JSON");
    rorbits->add_option("--tmax", t_max, "period cap");
    rorbits->callback([&] { run = [&] { return orbit_outputs(load_form(), orbit_scan(common, t_max)); }; });
    auto* rvol = leaf(rot, "volume", "three independent volume computations");
    needs_input(rvol, "RotForm JSON");
    rvol->callback([&] { run = [&] { return rotorus_volume(load_form(), common); }; });

    // disk maps
    auto* dsk = app.add_subcommand("disk", "actions, Calabi invariant and periodic points of disk maps");
    dsk->require_subcommand(1);
    auto* act = leaf(dsk, "act", "action at given points");
    needs_input(act, "DiskMap JSON");
    act->add_option("--lambda", lambda_file, "primitive one-form JSON")->check(CLI::ExistingFile);
    act->add_option("--point", points, "x y (repeatable)")->required();
    act->callback([&] { run = [&] { return disk_act(load_map(), load_lambda(), points, common); }; });
    auto* cal = leaf(dsk, "cal", "Calabi invariant, two ways");
    needs_input(cal, "DiskMap JSON");
    cal->add_option("--lambda", lambda_file, "primitive one-form JSON")->check(CLI::ExistingFile);
    cal->add_flag("--direct", direct_cal, "also integrate the pointwise action over the disk");
    cal->callback([&] { run = [&] { return disk_cal(load_map(), load_lambda(), direct_cal, common); }; });
    auto* per = leaf(dsk, "periodic", "periodic points up to --kmax with their actions");
    needs_input(per, "DiskMap JSON");
    per->add_option("--lambda", lambda_file, "primitive one-form JSON")->check(CLI::ExistingFile);
    per->callback([&] { run = [&] { return disk_periodic(load_map(), load_lambda(), common); }; });

    // plugs
    auto* plg = app.add_subcommand("plug", "plugs as return systems over a disk");
    plg->require_subcommand(1);
    auto* build = leaf(plg, "build", "construct a plug and report its return time");
    needs_input(build, "plug JSON {L, radius, map}");
    build->callback([&] {
        run = [&] {
            Outcome o;
            o.doc = plug_summary(build_plug(load_plug()));
            o.files.push_back({"plug.json", dump(o.doc)});
            return o;
        };
    });
    auto* va = leaf(plg, "verify-a", "closed orbits of period >= 1 and volume below eps, for L = 1");
    needs_input(va, "plug JSON");
    va->add_option("--eps", eps, "volume threshold")->required();
    va->callback([&] {
        run = [&] {
            return plug_report_outcome(plug::verify_a(build_plug(load_plug()), eps, periodic_search(common)),
                                       "verify_a.json");
        };
    });
    auto* vb = leaf(plg, "verify-b", "action bounds and periods for an n-step plug");
    needs_input(vb, "plug JSON");
    vb->add_option("--eps", eps, "Calabi slack")->required();
    vb->add_option("--n", n, "period threshold")->required();
    vb->callback([&] {
        run = [&] {
            const auto s = load_plug();
            // b4 is only complete when the search reaches period n - 1
            auto search = periodic_search(common);
            if (!common.kmax) search.k_max = std::max(1, n - 1);
            return plug_report_outcome(plug::verify_b(s.map, s.L, n, eps, search), "verify_b.json");
        };
    });
    auto* porb = leaf(plg, "orbits", "closed orbits of the plug with their periods");
    needs_input(porb, "plug JSON");
    porb->callback([&] {
        run = [&] {
            const auto p = build_plug(load_plug());
            const auto search = periodic_search(common);
            const auto orbits = plug::orbit_periods(p, search);
            Outcome o;
            Json list = Json::array();
            for (const auto& x : orbits) {
                auto j = io::to_json(x.orbit);
                j["T"] = x.period;
                list.push_back(j);
            }
            o.doc = {{"context", {{"search", io::to_json(search)}}}, {"heuristic", true}, {"orbits", list}};
            o.files.push_back({"plug_orbits.json", dump(o.doc)});
            o.files.push_back({"plug_orbits.csv", plug_orbits_csv(orbits)});
            return o;
        };
    });
    auto* pvol = leaf(plg, "volume", "plug volume three ways");
    needs_input(pvol, "plug JSON");
    pvol->callback([&] { run = [&] { return plug_volume(load_plug(), common); }; });
    auto* resc = leaf(plg, "rescale", "scale the disk by a factor and the fiber by its square");
    needs_input(resc, "plug JSON");
    resc->add_option("--factor", factor, "radius factor")->required();
    resc->callback([&] {
        run = [&] {
            const auto p = plug::rescale_plug(build_plug(load_plug()), factor);
            Outcome o;
            o.doc = io::to_json(io::PlugSpec{p.fiber_length(), p.map()});
            o.files.push_back({"plug_rescaled.json", dump(o.doc)});
            o.files.push_back({"plug_rescaled_summary.json", dump(plug_summary(p))});
            return o;
        };
    });
    auto* real = leaf(plg, "realize", "rotational contact form whose return system is a radial-twist plug");
    needs_input(real, "plug JSON with a single radial twist");
    real->add_option("--tmax", t_max, "period cap for the orbit table");
    real->callback([&] {
        run = [&] {
            const auto s = load_plug();
            const auto form = plug::realize_rotational(single_twist(s).profile, s.L, s.map.radius());
            auto o = orbit_outputs(form, orbit_scan(common, t_max));
            o.files.insert(o.files.begin(), {"realized_form.json", dump(io::to_json(form))});
            o.doc = {{"form", io::to_json(form)}, {"orbits", o.doc}};
            return o;
        };
    });

    // certificates
    auto* cert = app.add_subcommand("certify", "exact systolic-ratio bookkeeping");
    cert->require_subcommand(1);
    auto* crun = leaf(cert, "run", "certify an assembly");
    needs_input(crun, "assembly JSON");
    crun->callback([&] { run = [&] { return certify_run(io::assembly_from_json(load(input))); }; });
    auto* csweep = leaf(cert, "sweep", "template certificates along a sequence of eps");
    csweep->add_option("--ell", ell, "number of Reeb flow pieces")->required();
    csweep->add_option("--eps", eps_list, "eps values, exact literals")->required();
    csweep->callback([&] { run = [&] { return certify_sweep(ell, eps_list); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return emit(run(), common);
    } catch (const plug::PlugRejected& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const io::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
