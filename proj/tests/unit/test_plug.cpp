#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "systolic/plug/plug.hpp"
#include "systolic/plug/realize.hpp"
#include "systolic/plug/verify.hpp"
#include "systolic/rotorus/orbits.hpp"
#include "systolic/rotorus/return_system.hpp"
#include "systolic/rotorus/volume.hpp"

using namespace systolic;
using namespace systolic::plug;
using numerics::pi;
using numerics::RadialFunction;
using numerics::two_pi;

namespace {

// rho(r) = -c (1 - r^2)^3 on the unit disk
RadialFunction cubic_profile(double c) { return RadialFunction::bump_power(-c, 1.0, 3); }
DiskMap cubic_twist(double c) { return DiskMap::twist(1.0, cubic_profile(c)); }

// sigma(r) = -(3c/2)(G(1) - G(r^2)), G(u) = u^2/2 - 2u^3/3 + u^4/4; sigma(0) = -c/8.
double cubic_sigma(double c, double r) {
    const auto G = [](double u) { return u * u / 2 - 2 * u * u * u / 3 + u * u * u * u / 4; };
    return -1.5 * c * (G(1.0) - G(r * r));
}

// int sigma dA = -1.5 c pi (G(1) - int_0^1 G) = -c pi / 20
double cubic_calabi(double c) { return -c * pi / 20.0; }

// (1 - r^2)^3 = target / c
double cubic_radius_where(double c, double target) { return std::sqrt(1.0 - std::cbrt(target / c)); }

DiskMap hamiltonian_map() {
    disk::HamiltonianStep h;
    h.time = 1.0;
    h.terms.push_back({RadialFunction::bump_power(0.5, 0.8, 4), 0, 1.0, 0.0});
    h.terms.push_back({RadialFunction::bump_power(0.3, 0.8, 4), 1, 1.0, 0.5});
    h.steps_per_unit_time = 12;
    return DiskMap(1.0, {h});
}

}  // namespace

TEST(PlugSystem, IdentityPlug) {
    const auto plug = make_plug(DiskMap::identity(0.6), 1.0);
    for (double x : {0.0, 0.3, 0.59}) EXPECT_EQ(plug.tau({x, 0.0}), 1.0);
    EXPECT_NEAR(plug.volume().value, pi * 0.36, 1e-15);
    EXPECT_NEAR(plug.tau_integral().value, pi * 0.36, 1e-12);
}

TEST(PlugSystem, AcceptsAndRejectsByActionAtCenter) {
    const auto plug = make_plug(cubic_twist(4.0), 1.0);
    EXPECT_NEAR(plug.tau({0, 0}), 0.5, 1e-10);
    EXPECT_NEAR(plug.min_action().value, -0.5, 1e-10);
    // a quadratic minimum is located only to about the square root of the value tolerance
    EXPECT_NEAR(numerics::norm(plug.min_action().point), 0.0, 1e-4);
    EXPECT_NEAR(plug.tau({0.6, 0.8}), 1.0, 1e-12);  // boundary of the support
    try {
        make_plug(cubic_twist(16.0), 1.0);
        FAIL() << "expected rejection";
    } catch (const PlugRejected& e) {
        EXPECT_NEAR(e.tau, -1.0, 1e-8);
        EXPECT_NEAR(numerics::norm(e.witness), 0.0, 1e-4);
    }
    EXPECT_THROW(make_plug(DiskMap::identity(1.0), 0.0), std::invalid_argument);
}

TEST(PlugSystem, VolumeIdentity) {
    for (double c : {0.8, 4.0, -3.0}) {
        const auto plug = make_plug(cubic_twist(c), 1.3);
        const double exact = 1.3 * pi + cubic_calabi(c);
        EXPECT_NEAR(plug.volume().value, exact, 1e-9) << c;
        EXPECT_NEAR(plug.tau_integral().value, exact, 1e-7) << c;
    }
    const auto ham = make_plug(hamiltonian_map(), 2.0);
    EXPECT_NEAR(ham.volume().value, ham.tau_integral().value, 1e-7);
}

TEST(PlugOrbits, IdentityAndFixedPoints) {
    for (const auto& o : orbit_periods(make_plug(DiskMap::identity(1.0), 1.0), {2, 6})) EXPECT_EQ(o.period, 1.0);
    const double c = 2.0;
    const auto plug = make_plug(cubic_twist(c), 1.0);
    bool origin = false;
    for (const auto& o : orbit_periods(plug, {1, 8})) {
        ASSERT_EQ(o.orbit.period, 1);
        const double r = numerics::norm(o.orbit.point);
        EXPECT_NEAR(o.period, 1.0 + cubic_sigma(c, r), 1e-8) << r;
        origin = origin || r < 1e-9;
    }
    EXPECT_TRUE(origin);
}

TEST(PlugOrbits, PeriodicOrbitSumsReturnTimes) {
    // rho hits -2pi/3 at one radius: a circle of period-3 points
    const double c = 3.0;
    const auto plug = make_plug(cubic_twist(c), 1.0);
    const double rs = cubic_radius_where(c, two_pi / 3.0);
    int found = 0;
    for (const auto& o : orbit_periods(plug, {3, 16})) {
        if (o.orbit.period != 3) continue;
        ++found;
        EXPECT_NEAR(numerics::norm(o.orbit.point), rs, 1e-7);
        EXPECT_NEAR(o.period, 3.0 * (1.0 + cubic_sigma(c, rs)), 1e-7);
    }
    EXPECT_GT(found, 0);
}

TEST(VerifyB, IdentityMap) {
    const auto rep = verify_b(DiskMap::identity(1.0), 1.0, 3, 0.1, {3, 8});
    EXPECT_TRUE(rep.get("b1").pass);
    EXPECT_FALSE(rep.get("b2").pass);
    EXPECT_NEAR(rep.get("b2").margin, -pi + 0.1, 1e-12);
    EXPECT_TRUE(rep.get("b3").pass);
    EXPECT_TRUE(rep.get("b4").pass);
    EXPECT_TRUE(rep.warnings.empty());
}

TEST(VerifyB, NegativeTwistFailsFixedPointAction) {
    for (double c : {0.8, 2.0}) {
        const auto rep = verify_b(cubic_twist(c), 1.0, 2, 0.1, {1, 8});
        const auto& b3 = rep.get("b3");
        EXPECT_FALSE(b3.pass);
        EXPECT_NEAR(b3.margin, -c / 8.0, 1e-9);
        ASSERT_TRUE(b3.witness);
        EXPECT_NEAR(numerics::norm(*b3.witness), 0.0, 1e-9);
        EXPECT_NEAR(rep.calabi, cubic_calabi(c), 1e-9);
    }
}

TEST(VerifyB, ActionFloorAndShortPeriods) {
    // sigma(0) = -1 < -L + L/2
    const auto b1 = verify_b(cubic_twist(8.0), 1.0, 2, 0.1, {1, 8});
    EXPECT_FALSE(b1.get("b1").pass);
    EXPECT_NEAR(b1.get("b1").margin, -0.5, 1e-8);
    EXPECT_NEAR(numerics::norm(*b1.get("b1").witness), 0.0, 1e-4);

    const auto b4 = verify_b(cubic_twist(3.0), 1.0, 5, 0.1, {5, 16});
    EXPECT_FALSE(b4.get("b4").pass);
    EXPECT_EQ(b4.get("b4").margin, -2.0);
    EXPECT_NEAR(numerics::norm(*b4.get("b4").witness), cubic_radius_where(3.0, two_pi / 3.0), 1e-7);

    const auto warn = verify_b(DiskMap::identity(1.0), 1.0, 5, 0.1, {2, 4});
    EXPECT_EQ(warn.warnings.size(), 1u);
}

TEST(VerifyA, IdentityMapVolumeThreshold) {
    const double r = 0.1;
    const auto ok = verify_a(make_plug(DiskMap::identity(r), 1.0), 0.05, {2, 6});
    EXPECT_TRUE(ok.all_pass());
    EXPECT_EQ(ok.observed_tmin, 1.0);
    EXPECT_NEAR(ok.volume, pi * r * r, 1e-15);
    const auto bad = verify_a(make_plug(DiskMap::identity(r), 1.0), 0.02, {2, 6});
    EXPECT_FALSE(bad.get("a4").pass);
    EXPECT_TRUE(bad.get("a3").pass);
    EXPECT_EQ(bad.first_failure()->name, "a4");
    EXPECT_THROW(verify_a(make_plug(DiskMap::identity(r), 2.0), 0.05, {1, 6}), std::invalid_argument);
}

TEST(VerifyA, NegativeTwistHasShortOrbit) {
    const auto rep = verify_a(make_plug(cubic_twist(0.8), 1.0), 10.0, {1, 8});
    EXPECT_FALSE(rep.get("a3").pass);
    EXPECT_NEAR(rep.observed_tmin, 0.9, 1e-9);
    EXPECT_NEAR(rep.get("a3").margin, -0.1, 1e-9);
}

TEST(VerifyA, FollowsFromVerifyB) {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int b_passed = 0;
    for (int i = 0; i < 24; ++i) {
        const double r = 0.05 + 0.3 * u(rng);
        const int n = 2 + static_cast<int>(3 * u(rng));
        const double amp = (two_pi / n) * u(rng);
        const double eps = 2.0 * pi * r * r * u(rng) + 1e-3;
        const auto map = i % 3 == 0 ? DiskMap::identity(r) : DiskMap::twist(r, RadialFunction::bump_power(amp, r, 3));
        const disk::PeriodicSearch search{n, 8};
        const auto b = verify_b(map, 1.0, n, eps, search);
        if (!b.all_pass()) continue;
        ++b_passed;
        const auto a = verify_a(make_plug(map, 1.0), eps, search);
        EXPECT_TRUE(a.all_pass()) << i << " " << a.first_failure()->name;
        EXPECT_GE(a.observed_tmin, 1.0 - period_slack);
    }
    EXPECT_GE(b_passed, 3);
}

TEST(Rescale, IdentityFactorAndScalingLaws) {
    const auto plug = make_plug(cubic_twist(2.0), 1.5);
    const auto same = rescale_plug(plug, 1.0);
    EXPECT_EQ(same.radius(), plug.radius());
    EXPECT_EQ(same.fiber_length(), plug.fiber_length());
    for (double x : {0.0, 0.2, 0.7}) EXPECT_NEAR(same.tau({x, 0.1}), plug.tau({x, 0.1}), 1e-12);

    const auto id = make_plug(DiskMap::identity(0.5), 2.0);
    const auto id2 = rescale_plug(id, 2.0);
    EXPECT_EQ(id2.radius(), 1.0);
    EXPECT_EQ(id2.fiber_length(), 8.0);
    EXPECT_NEAR(id2.volume().value, 16.0 * id.volume().value, 1e-12);

    for (double f : {0.3, 2.5}) {
        const auto big = rescale_plug(plug, f);
        EXPECT_NEAR(big.volume().value, std::pow(f, 4) * plug.volume().value, 1e-8);
        for (double x : {0.0, 0.25, 0.6}) {
            const Vec2 z{x, -0.2 * x};
            EXPECT_NEAR(big.tau(f * z), f * f * plug.tau(z), 1e-8);
            EXPECT_GT(big.tau(f * z), 0.0);
        }
    }
}

TEST(Realize, ZeroTwistIsStandardForm) {
    const auto form = realize_rotational(RadialFunction::constant(0.0, 1.0), 1.7, 1.0);
    for (double r : {0.0, 0.4, 1.0}) {
        EXPECT_NEAR(form.c()(r), r * r / 2, 1e-15);
        EXPECT_NEAR(form.d()(r), 1.0, 1e-15);
    }
    EXPECT_NEAR(rotorus::tmin(form, {10.0, 3, 2000}).value, 1.7, 1e-12);
}

TEST(Realize, ReturnSystemReproducesTwist) {
    const double L = 1.2;
    for (double c : {2.0, -3.0, 7.0}) {
        const auto form = realize_rotational(cubic_profile(c), L, 1.0);
        const rotorus::ReturnSystem rs(form, rotorus::Section::core_angle);
        for (int i = 0; i <= 200; ++i) {
            const double r = i / 200.0;
            const double tau = L + cubic_sigma(c, r);
            EXPECT_NEAR(rs.return_time(r), tau, 1e-10) << c << " " << r;
            EXPECT_NEAR(rs.shift(r), -c * std::pow(1 - r * r, 3), 1e-10) << c << " " << r;
            EXPECT_NEAR(form.wronskian(r) * L, r * tau, 1e-10) << c << " " << r;
        }
        EXPECT_NEAR(form.d()(1.0), 1.0, 1e-14);
    }
    EXPECT_THROW(realize_rotational(cubic_profile(16.0), 1.0, 1.0), std::domain_error);
}

TEST(Realize, VolumeMatchesCalabi) {
    for (double c : {2.0, -3.0, 7.0}) {
        const double L = 1.2;
        const auto v = rotorus::volume(realize_rotational(cubic_profile(c), L, 1.0));
        const double exact = L * pi + cubic_calabi(c);
        EXPECT_NEAR(v.radial.value, exact, 1e-7);
        EXPECT_NEAR(v.section.value, exact, 1e-7);
        EXPECT_NEAR(v.cartesian.value, exact, 1e-7);
        EXPECT_EQ(v.section_used, rotorus::Section::core_angle);
    }
}

TEST(Realize, FullTwistGivesResonantTorus) {
    const double c = 7.0, L = 1.0;
    const double rs = cubic_radius_where(c, two_pi);
    const auto e = rotorus::orbit_enumerate(realize_rotational(cubic_profile(c), L, 1.0), {3.0, 1, 10000});
    int found = 0;
    for (const auto& o : e.orbits) {
        if (o.kind != rotorus::OrbitKind::resonant_torus) continue;
        if (o.p == 0) {  // the boundary circle, where the twist vanishes
            EXPECT_NEAR(o.r, 1.0, 1e-12);
            EXPECT_NEAR(o.period, L, 1e-12);
            continue;
        }
        ++found;
        EXPECT_EQ(o.q, 1);
        EXPECT_EQ(o.p, -1);
        EXPECT_NEAR(o.r, rs, 1e-10);
        EXPECT_NEAR(o.period, L + cubic_sigma(c, rs), 1e-10);
    }
    EXPECT_EQ(found, 1);
}

TEST(Realize, PeriodDictionary) {
    // 3D orbit records of the realized form against sums of tau over 2D periodic orbits
    const double c = 3.0, L = 1.0;
    const auto plug = make_plug(cubic_twist(c), L);
    const auto e = rotorus::orbit_enumerate(realize_rotational(cubic_profile(c), L, 1.0), {4.0, 3, 10000});
    const auto flat = orbit_periods(plug, {3, 16});
    int matched = 0;
    for (const auto& rec : e.orbits) {
        if (rec.kind == rotorus::OrbitKind::resonant_band) continue;
        for (const auto& o : flat) {
            if (o.orbit.period != rec.q || std::abs(numerics::norm(o.orbit.point) - rec.r) > 1e-6) continue;
            EXPECT_NEAR(o.period, rec.period, 1e-8);
            ++matched;
        }
    }
    EXPECT_GE(matched, 2);  // the core and the period-3 circle
}
