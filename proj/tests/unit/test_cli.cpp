#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "systolic/io/files.hpp"
#include "systolic/io/json.hpp"

using systolic::io::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string("\"") + SYSTOLIC_CLI_PATH + "\" " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    while (const auto n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
    const int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string sample(const char* name) { return (fs::path(SYSTOLIC_SAMPLES_DIR) / name).string(); }

fs::path scratch(const char* name) {
    const auto p = fs::temp_directory_path() / (std::string("systolic_cli_test_") + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(Cli, ProfileDesignPasses) {
    const auto r = cli("profile design --s 0.01 --delta 0.1 --rho 0.5 --r0 0.1 --r1 0.3");
    ASSERT_EQ(r.status, 0);
    const auto j = Json::parse(r.out);
    EXPECT_TRUE(j["report"]["all_pass"].get<bool>());
    EXPECT_TRUE(j["tau"]["monotone"].get<bool>());
    EXPECT_EQ(j["context"]["grid"], 10000);
}

TEST(Cli, ProfileDesignWritesArtifacts) {
    const auto dir = scratch("design");
    ASSERT_EQ(cli("profile design --params " + sample("profile_params.json") + " --out " + dir.string()).status, 0);
    for (const char* f : {"profile_curve.json", "profile_report.json", "gamma.svg", "tau.svg", "tau_report.json"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    // the written curve verifies on its own
    EXPECT_EQ(cli("profile verify " + (dir / "profile_curve.json").string()).status, 0);
    fs::remove_all(dir);
}

TEST(Cli, InfeasibleDesignIsACheckFailure) {
    const auto r = cli("profile design --s 0.5 --delta 0.1 --rho 0.5 --r0 0.1 --r1 0.3");
    EXPECT_EQ(r.status, 1);
    EXPECT_FALSE(Json::parse(r.out)["feasible"].get<bool>());
}

TEST(Cli, PlantedCurveNamesB2) {
    // g = 1.1 - r^2 + 2 r^4 increases beyond r = 1/2
    const auto dir = scratch("bad_curve");
    fs::create_directories(dir);
    const Json curve = {
        {"params", {{"s", 0.01}, {"delta", 0.1}, {"rho", 1.0}, {"r0", 0.1}, {"r1", 0.3}}},
        {"f", {{"family", "polynomial"}, {"coeffs", {0, 0, 1}}, {"r_max", 1.0}, {"parity", "even"}}},
        {"g", {{"family", "polynomial"}, {"coeffs", {1.1, 0, -1, 0, 2}}, {"r_max", 1.0}, {"parity", "even"}}}};
    systolic::io::write_file_atomic(dir / "bad_curve.json", curve.dump());
    const auto r = cli("profile verify " + (dir / "bad_curve.json").string());
    EXPECT_EQ(r.status, 1);
    const auto j = Json::parse(r.out);
    bool b2_failed = false;
    for (const auto& c : j["report"]["conditions"])
        if (c["name"] == "B2") b2_failed = !c["pass"].get<bool>();
    EXPECT_TRUE(b2_failed);
    fs::remove_all(dir);
}

TEST(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(cli("profile design --s 0.01").status, 2);
    EXPECT_EQ(cli("certify run /nonexistent.json").status, 2);
    EXPECT_EQ(cli("plug build " + sample("twist_map.json")).status, 2);  // a map where a plug is expected
    EXPECT_EQ(cli("rotorus orbits " + sample("assembly.json")).status, 2);
    EXPECT_EQ(cli("certify sweep --ell 1 --eps abc").status, 2);
    EXPECT_EQ(cli("frobnicate").status, 2);
    EXPECT_EQ(cli("plug volume " + sample("twist_plug.json") + " --format xml").status, 2);
}

TEST(Cli, IdentityPlugVolume) {
    const auto r = cli("plug volume " + sample("identity_plug.json"));
    ASSERT_EQ(r.status, 0);
    const auto j = Json::parse(r.out);
    const double expect = 2.0 * M_PI * 0.25;  // L pi r^2
    EXPECT_NEAR(j["calabi_polar"]["value"].get<double>(), expect, 1e-15);
    EXPECT_NEAR(j["tau_integral"]["value"].get<double>(), expect, 1e-12);
    EXPECT_LT(j["spread"].get<double>(), 1e-7);
}

TEST(Cli, RadialTwistFailsB3AtOrigin) {
    const auto r = cli("plug verify-b " + sample("twist_plug.json") + " --n 3 --eps 0.1");
    EXPECT_EQ(r.status, 1);
    const auto j = Json::parse(r.out);
    int seen = 0;
    for (const auto& a : j["axioms"]) {
        if (a["name"] != "b3") continue;
        ++seen;
        EXPECT_FALSE(a["pass"].get<bool>());
        EXPECT_NEAR(a["witness"][0].get<double>(), 0.0, 1e-9);
        EXPECT_NEAR(a["witness"][1].get<double>(), 0.0, 1e-9);
        EXPECT_NEAR(a["margin"].get<double>(), -0.5 / 8.0, 1e-9);  // sigma(0) = -c/8
    }
    EXPECT_EQ(seen, 1);
}

TEST(Cli, RealizedPlugCsvHasCoreOrbit) {
    const auto r = cli("plug realize " + sample("twist_plug.json") + " --format csv");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("kind,r,p,q,T\n", 0), 0u);
    // T = L + sigma(0) = 1 - 0.5/8
    EXPECT_NE(r.out.find("\ncore,0,0,1,0.9375\n"), std::string::npos) << r.out;
}

TEST(Cli, CertificateRunsAndRefuses) {
    const auto ok = cli("certify run " + sample("assembly.json"));
    ASSERT_EQ(ok.status, 0);
    EXPECT_EQ(Json::parse(ok.out)["systolic_ratio_bound"]["exact"], "9801/400");
    const auto bad = cli("certify run " + sample("assembly_bad_area.json"));
    EXPECT_EQ(bad.status, 1);
    EXPECT_EQ(Json::parse(bad.out)["failed_inequality"], "area");
    const auto text = cli("certify run " + sample("assembly.json") + " --format text");
    EXPECT_NE(text.out.find("re-verified exactly: yes"), std::string::npos);
}

TEST(Cli, SweepIsMonotone) {
    const auto r = cli("certify sweep --ell 1 --eps 0.01 0.001 0.0001");
    ASSERT_EQ(r.status, 0);
    const auto j = Json::parse(r.out);
    EXPECT_TRUE(j["strictly_increasing"].get<bool>());
    EXPECT_EQ(j["rows"][1]["systolic_ratio_bound"]["exact"], "998001/4000");
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const auto a = cli("plug orbits " + sample("twist_plug.json") + " --kmax 2 --format csv");
    const auto b = cli("plug orbits " + sample("twist_plug.json") + " --kmax 2 --format csv");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    const auto c = cli("rotorus orbits " + sample("twist_plug.json") + " --format json");
    EXPECT_EQ(c.status, 2);  // a plug spec is not a form
}
