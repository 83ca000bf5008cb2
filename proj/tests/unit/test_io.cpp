#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "systolic/io/csv.hpp"
#include "systolic/io/files.hpp"
#include "systolic/io/json.hpp"
#include "systolic/io/svg.hpp"

using namespace systolic;
using io::Json;
using numerics::Parity;
using numerics::RadialFunction;

TEST(JsonRadial, HermiteRoundTripIsExact) {
    const RadialFunction f({0.0, 0.3, 1.0}, {1.0, 0.5, 0.0}, {0.0, -2.0, 0.0}, std::vector<double>{-1.0, 0.5, 3.0},
                           Parity::even);
    const auto back = io::radial_function_from_json(io::to_json(f));
    for (double r = 0.0; r <= 1.0; r += 0.01) {
        EXPECT_EQ(back(r), f(r));
        EXPECT_EQ(back.derivative(r), f.derivative(r));
    }
    EXPECT_EQ(io::to_json(back).dump(), io::to_json(f).dump());
}

TEST(JsonRadial, PiecesAndFamilies) {
    const auto poly = io::radial_function_from_json(
        Json::parse(R"({"family": "polynomial", "coeffs": [1, 0, -2], "r_max": 1.5, "parity": "even"})"));
    EXPECT_NEAR(poly(0.5), 0.5, 1e-15);
    EXPECT_EQ(poly.parity(), Parity::even);
    const auto bump =
        io::radial_function_from_json(Json::parse(R"({"family": "bump_power", "amplitude": 2, "support": 1, "power": 3})"));
    EXPECT_NEAR(bump(0.5), 2.0 * std::pow(0.75, 3), 1e-15);
    const auto pieces = io::radial_function_from_json(io::to_json(bump));
    EXPECT_EQ(pieces(0.37), bump(0.37));
    const auto k = io::radial_function_from_json(Json::parse(R"({"family": "constant", "value": 4, "r_max": 2})"));
    EXPECT_EQ(k(1.9), 4.0);
}

TEST(JsonStrict, UnknownAndMissingKeysAreRejected) {
    EXPECT_THROW(io::radial_function_from_json(Json::parse(R"({"family": "constant", "value": 1, "r_max": 1, "x": 0})")),
                 io::InputError);
    EXPECT_THROW(io::radial_function_from_json(Json::parse(R"({"family": "constant", "value": 1})")), io::InputError);
    EXPECT_THROW(io::radial_function_from_json(Json::parse(R"({"family": "sine", "r_max": 1})")), io::InputError);
    EXPECT_THROW(io::profile_params_from_json(Json::parse(R"({"s": 0.01, "delta": 0.1, "rho": 0.5, "r0": 0.1})")),
                 io::InputError);
    EXPECT_THROW(io::profile_params_from_json(
                     Json::parse(R"({"s": 0.01, "delta": 0.1, "rho": 0.5, "r0": 0.1, "r1": 0.3, "tol": 1})")),
                 io::InputError);
    EXPECT_THROW(io::disk_map_from_json(Json::parse(R"({"radius": 1, "primitives": [{"type": "shear"}]})")),
                 io::InputError);
    EXPECT_THROW(io::plug_spec_from_json(Json::parse(R"({"L": 1, "radius": 2, "map": {"radius": 1}})")), io::InputError);
    // wrong types
    EXPECT_THROW(io::profile_params_from_json(
                     Json::parse(R"({"s": "0.01", "delta": 0.1, "rho": 0.5, "r0": 0.1, "r1": 0.3})")),
                 io::InputError);
    // library preconditions surface as input errors
    EXPECT_THROW(io::profile_params_from_json(Json::parse(R"({"s": 0.01, "delta": 0.1, "rho": 0.5, "r0": 0.4, "r1": 0.3})")),
                 io::InputError);
}

TEST(JsonDiskMap, RoundTripPreservesTheMap) {
    disk::HamiltonianStep h;
    h.time = 0.7;
    h.steps_per_unit_time = 16;
    h.terms.push_back({RadialFunction::bump_power(0.4, 0.8, 4), 1, 1.0, -0.5});
    const disk::DiskMap m(1.0, {disk::RadialTwist{RadialFunction::bump_power(-1.0, 1.0, 3), 1.0}, h});
    const auto back = io::disk_map_from_json(io::to_json(m));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int i = 0; i < 50; ++i) {
        const numerics::Vec2 z{u(rng), u(rng)};
        EXPECT_EQ(back(z).x, m(z).x);
        EXPECT_EQ(back(z).y, m(z).y);
    }
    EXPECT_EQ(io::to_json(back).dump(), io::to_json(m).dump());
}

TEST(JsonRotForm, RoundTrip) {
    const rotorus::RotForm f(1.0, 2.0, 1.5, RadialFunction::polynomial({0, 0, 0.5, 0, 0.25}, 1.0, Parity::even),
                             RadialFunction::polynomial({1, 0, -3}, 1.0, Parity::even));
    const auto back = io::rot_form_from_json(io::to_json(f));
    EXPECT_EQ(back.core_period(), 2.0);
    EXPECT_EQ(back.kappa(), 1.5);
    for (double r : {0.0, 0.25, 0.8}) EXPECT_EQ(back.wronskian(r), f.wronskian(r));
}

TEST(JsonAssembly, ExactAndDecimalInputs) {
    const auto in = io::assembly_from_json(Json::parse(R"({
        "ell": 2, "eps": 0.04, "areas": ["1", 1], "tau_deviation": "1/50",
        "plugs": [{"source": "hypothesis"},
                  {"source": "report", "volume": 0.01, "observed_tmin": 1.0, "a3": true, "a4": true}]})"));
    EXPECT_EQ(in.eps, certify::Rational(1, 25));  // 0.04 is read as the decimal it prints as
    EXPECT_EQ(in.areas[1], 1);
    EXPECT_EQ(in.tau_deviation, certify::Rational(1, 50));
    EXPECT_EQ(in.plugs[1].source, certify::PlugSource::report);
    EXPECT_THROW(io::assembly_from_json(Json::parse(R"({"ell": 1, "eps": "1/100", "areas": ["1"],
        "tau_deviation": "1/200", "plugs": [{"source": "hypothesis", "volume": 0.1}]})")),
                 io::InputError);
    EXPECT_THROW(io::assembly_from_json(Json::parse(R"({"ell": 1, "eps": "1/0", "areas": ["1"],
        "tau_deviation": "1/200", "plugs": [{"source": "hypothesis"}]})")),
                 io::InputError);
}

TEST(JsonCertificate, TraceCarriesExactValues) {
    const auto cert = certify::systolic_bound(certify::template_input(1, certify::Rational(1, 100)));
    const auto j = io::to_json(cert);
    EXPECT_EQ(j["systolic_ratio_bound"]["exact"], "9801/400");
    EXPECT_EQ(j["systolic_ratio_bound"]["decimal"], 24.5025);
    EXPECT_TRUE(j["reverified"].get<bool>());
    EXPECT_EQ(j["trace"].size(), cert.trace.size());
    for (const auto& s : j["trace"]) EXPECT_TRUE(s["holds"].get<bool>() || s["assumed"].get<bool>());
}

TEST(Csv, OrbitTable) {
    rotorus::OrbitEnumeration e;
    e.orbits.push_back({rotorus::OrbitKind::core, 0.0, 0.0, 0, 1, 1.25, 0.0});
    e.orbits.push_back({rotorus::OrbitKind::resonant_torus, 0.1, 0.1, -2, 3, 3.5, 0.0});
    EXPECT_EQ(io::orbits_csv(e), "kind,r,p,q,T\ncore,0,0,1,1.25\nresonant-torus,0.1,-2,3,3.5\n");
    EXPECT_EQ(io::format_number(0.1), "0.1");
    EXPECT_EQ(io::format_number(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(std::stod(io::format_number(std::exp(1.0))), std::exp(1.0));
}

TEST(Svg, DeterministicAndWellFormed) {
    io::Plot p{"t", "x", "y", {{{{0, 0}, {1, 1}, {2, 0.5}}, false, "#000"}}, {{{1, 1}, "peak <1>"}}, {0.5}};
    const auto a = io::render_svg(p), b = io::render_svg(p);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.rfind("<svg", 0), 0u);
    EXPECT_NE(a.find("</svg>"), std::string::npos);
    EXPECT_NE(a.find("peak &lt;1&gt;"), std::string::npos);
    EXPECT_NE(a.find("<polyline"), std::string::npos);
}

TEST(Files, AtomicWriteReplacesContent) {
    const auto dir = std::filesystem::temp_directory_path() / "systolic_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.txt";
    io::write_file_atomic(path, "first");
    io::write_file_atomic(path, "second");
    EXPECT_EQ(io::read_file(path), "second");
    EXPECT_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
    EXPECT_THROW(io::write_file_atomic(dir / "missing" / "x.txt", "y"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
