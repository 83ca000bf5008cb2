#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "systolic/diskmap/action.hpp"
#include "systolic/diskmap/disk_map.hpp"
#include "systolic/diskmap/periodic_points.hpp"
#include "systolic/numerics/quadrature.hpp"
#include "systolic/numerics/roots.hpp"

using namespace systolic;
using namespace systolic::disk;
using numerics::pi;
using numerics::two_pi;

namespace {

// rho(r) = -c (1 - r^2)^3 on the unit disk.
DiskMap cubic_twist(double c, double radius = 1.0) {
    return DiskMap::twist(radius, RadialFunction::bump_power(-c, radius, 3));
}

HamiltonianStep sample_hamiltonian(double support = 0.8) {
    HamiltonianStep h;
    h.time = 1.0;
    h.terms.push_back({RadialFunction::bump_power(0.5, support, 4), 0, 1.0, 0.0});
    h.terms.push_back({RadialFunction::bump_power(0.3, support, 4), 1, 1.0, 0.5});
    h.terms.push_back({RadialFunction::bump_power(0.2, support, 4), 2, 0.0, 1.0});
    return h;
}

DiskMap hamiltonian_map(double radius = 1.0) { return DiskMap(radius, {sample_hamiltonian()}); }

PrimitiveOneForm shifted_primitive() {
    return PrimitiveOneForm({{1, 0, 0.3}, {1, 1, -0.7}, {0, 3, 0.25}}, RadialFunction::bump_power(1.0, 1.0, 3));
}

Vec2 random_point(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double th = two_pi * u(rng);
    return {r * std::cos(th), r * std::sin(th)};
}

// Closed-form action of the cubic twist: sigma(r) = -(3c/2) (G(1) - G(r^2)),
// G(u) = u^2/2 - 2u^3/3 + u^4/4 (antiderivative of u(1-u)^2).
double cubic_twist_sigma(double c, double r) {
    const auto G = [](double u) { return u * u / 2 - 2 * u * u * u / 3 + u * u * u * u / 4; };
    return -1.5 * c * (G(1.0) - G(r * r));
}

}  // namespace

TEST(DiskMap, IdentityAndCompactSupport) {
    const auto id = DiskMap::identity(1.0);
    EXPECT_EQ(id(Vec2{0.3, 0.4}), (Vec2{0.3, 0.4}));
    const auto tw = DiskMap::twist(1.0, RadialFunction::bump_power(-2.0, 0.5, 3));
    EXPECT_DOUBLE_EQ(tw.support(), 0.5);
    EXPECT_EQ(tw(Vec2{0.6, 0.1}), (Vec2{0.6, 0.1}));
    EXPECT_THROW(id(Vec2{1.2, 0.0}), std::domain_error);
}

TEST(DiskMap, TwistRotatesByProfileValue) {
    const double c = 1.7;
    const auto tw = cubic_twist(c);
    const Vec2 w = tw(Vec2{0.5, 0.0});
    const double angle = -27.0 * c / 64.0;
    EXPECT_NEAR(w.x, 0.5 * std::cos(angle), 1e-14);
    EXPECT_NEAR(w.y, 0.5 * std::sin(angle), 1e-14);
}

TEST(DiskMap, IdentityOnSupportBoundary) {
    const auto h = hamiltonian_map();
    const auto tw = cubic_twist(2.0);
    for (int j = 0; j < 32; ++j) {
        const double th = two_pi * j / 32;
        const Vec2 a{0.8 * std::cos(th), 0.8 * std::sin(th)};
        EXPECT_LT(numerics::norm(h(a) - a), 1e-10);
        const Vec2 b{0.95 * std::cos(th), 0.95 * std::sin(th)};
        EXPECT_LT(numerics::norm(h(b) - b), 1e-10);
        const Vec2 c{std::cos(th), std::sin(th)};
        EXPECT_LT(numerics::norm(tw(c) - c), 1e-10);
    }
}

TEST(DiskMap, AreaPreservationAtRandomPoints) {
    const auto tw = cubic_twist(2.5);
    const auto h = hamiltonian_map();
    const auto comp = tw.compose(h).compose(tw);
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 z = random_point(rng, 1.0);
        EXPECT_NEAR(tw.differential(z).det(), 1.0, 1e-8);
        if (i % 4 == 0) {
            EXPECT_NEAR(h.differential(z).det(), 1.0, 1e-8);
            EXPECT_NEAR(comp.differential(z).det(), 1.0, 1e-8);
        }
    }
}

TEST(DiskMap, DifferentialMatchesFiniteDifferences) {
    const auto maps = {cubic_twist(1.3), hamiltonian_map(), cubic_twist(0.7).compose(hamiltonian_map())};
    std::mt19937_64 rng(5);
    for (const auto& m : maps) {
        for (int i = 0; i < 20; ++i) {
            const Vec2 z = random_point(rng, 0.9);
            const double h = 1e-6;
            const Vec2 dx = (1.0 / (2 * h)) * (m(z + Vec2{h, 0}) - m(z - Vec2{h, 0}));
            const Vec2 dy = (1.0 / (2 * h)) * (m(z + Vec2{0, h}) - m(z - Vec2{0, h}));
            const auto d = m.differential(z);
            EXPECT_NEAR(d.a, dx.x, 1e-6);
            EXPECT_NEAR(d.c, dx.y, 1e-6);
            EXPECT_NEAR(d.b, dy.x, 1e-6);
            EXPECT_NEAR(d.d, dy.y, 1e-6);
        }
    }
}

TEST(DiskMap, CompositionOrderIsExplicit) {
    const auto a = cubic_twist(1.0);
    const auto h = hamiltonian_map();
    const auto ah = a.compose(h);
    const Vec2 z{0.3, -0.2};
    const Vec2 expect = a(h(z));
    EXPECT_LT(numerics::norm(ah(z) - expect), 1e-14);
    EXPECT_GT(numerics::norm(h.compose(a)(z) - expect), 1e-6);
    EXPECT_THROW(a.compose(cubic_twist(1.0, 2.0)), std::invalid_argument);
}

TEST(DiskMap, RejectsBadPrimitives) {
    EXPECT_THROW(DiskMap(1.0, {RadialTwist{RadialFunction::bump_power(1.0, 2.0, 3), 2.0}}), std::invalid_argument);
    EXPECT_THROW(DiskMap(0.0), std::invalid_argument);
    HamiltonianStep wide;
    wide.time = 1.0;
    wide.terms.push_back({RadialFunction::bump_power(1.0, 1.5, 3), 0, 1.0, 0.0});
    EXPECT_THROW(DiskMap(1.0, {wide}), std::invalid_argument);
}

TEST(Action, IdentityHasZeroActionAndCalabi) {
    const ActionField af(DiskMap::identity(1.0));
    EXPECT_EQ(af(Vec2{0.2, 0.1}), 0.0);
    EXPECT_EQ(af.calabi().value, 0.0);
}

TEST(Action, CubicTwistAtOrigin) {
    const double c = 2.0;
    const ActionField af(cubic_twist(c));
    EXPECT_NEAR(af(Vec2{0.0, 0.0}), -c / 8.0, 1e-9);
}

TEST(Action, RadialClosedFormMatchesPathIntegral) {
    const auto tw = cubic_twist(1.6);
    const ActionField af(tw);
    const auto& prim = std::get<RadialTwist>(tw.primitives()[0]);
    for (double r : {0.0, 0.1, 0.33, 0.5, 0.72, 0.9, 0.999}) {
        const Vec2 z{r * std::cos(0.4), r * std::sin(0.4)};
        EXPECT_NEAR(af(z), radial_twist_action(prim, r).value, 1e-8);
        EXPECT_NEAR(af(z), cubic_twist_sigma(1.6, r), 1e-9);
    }
}

TEST(Action, VanishesOnSupportBoundary) {
    const ActionField af(hamiltonian_map(), shifted_primitive());
    for (int j = 0; j < 12; ++j) {
        const double th = two_pi * j / 12;
        EXPECT_LT(std::abs(af(Vec2{0.8 * std::cos(th), 0.8 * std::sin(th)})), 1e-9);
        EXPECT_LT(std::abs(af(Vec2{0.99 * std::cos(th), 0.99 * std::sin(th)})), 1e-9);
    }
}

TEST(Action, GradientIsPullbackDifference) {
    for (const auto& m : {cubic_twist(1.2), hamiltonian_map()}) {
        for (const auto& lam : {PrimitiveOneForm::standard(), shifted_primitive()}) {
            const ActionField af(m, lam);
            std::mt19937_64 rng(99);
            for (int i = 0; i < 6; ++i) {
                const Vec2 z = random_point(rng, 0.75);
                const double h = 1e-5;
                const double sx = (af(z + Vec2{h, 0}) - af(z - Vec2{h, 0})) / (2 * h);
                const double sy = (af(z + Vec2{0, h}) - af(z - Vec2{0, h})) / (2 * h);
                EXPECT_NEAR(sx, af.eta(z, {1, 0}), 1e-6);
                EXPECT_NEAR(sy, af.eta(z, {0, 1}), 1e-6);
            }
        }
    }
}

TEST(Action, ShiftedPrimitiveChangesActionByCoboundary) {
    const auto lam = shifted_primitive();
    for (const auto& m : {cubic_twist(1.2), hamiltonian_map()}) {
        const ActionField a0(m), a1(m, lam);
        std::mt19937_64 rng(3);
        for (int i = 0; i < 8; ++i) {
            const Vec2 z = random_point(rng, 0.9);
            EXPECT_NEAR(a1(z) - a0(z), lam.u(m(z)) - lam.u(z), 1e-9);
        }
    }
}

TEST(Action, SecondPathAgrees) {
    const ActionField af(hamiltonian_map(), shifted_primitive());
    for (Vec2 z : {Vec2{0.1, 0.2}, Vec2{-0.4, 0.3}, Vec2{0.5, -0.55}}) {
        EXPECT_NEAR(af.evaluate(z).value, af.evaluate_second_path(z).value, 1e-9);
    }
}

TEST(Calabi, CubicTwistMatchesNestedQuadrature) {
    const double c = 1.4;
    const auto sigma = [c](double r) {
        return -3.0 * c *
               numerics::integrate_1d([](double s) { return s * s * s * std::pow(1 - s * s, 2); }, r, 1.0).value;
    };
    const double oracle = two_pi * numerics::integrate_1d([&](double r) { return sigma(r) * r; }, 0.0, 1.0).value;
    EXPECT_NEAR(oracle, -pi * c / 20.0, 1e-12);
    const ActionField af(cubic_twist(c));
    EXPECT_NEAR(af.calabi().value, oracle, 1e-9);
    EXPECT_NEAR(af.calabi_direct().value, oracle, 1e-9);
}

TEST(Calabi, IndependentOfPrimitive) {
    for (const auto& m : {cubic_twist(0.9), hamiltonian_map()}) {
        const ActionField a0(m), a1(m, shifted_primitive());
        EXPECT_NEAR(a0.calabi().value, a1.calabi().value, 2e-8);
    }
}

TEST(Calabi, HomomorphismUnderComposition) {
    const auto phi = cubic_twist(1.1);
    const auto psi = hamiltonian_map();
    const double sum = ActionField(phi).calabi().value + ActionField(psi).calabi().value;
    EXPECT_NEAR(ActionField(phi.compose(psi)).calabi().value, sum, 1e-7);
    EXPECT_NEAR(ActionField(psi.compose(phi)).calabi().value, sum, 1e-7);
}

TEST(Calabi, FubiniAndDirectAgreeForHamiltonianMap) {
    // Both sides integrate the same discrete flow, so a coarser step keeps the comparison exact.
    auto h = sample_hamiltonian();
    h.steps_per_unit_time = 12;
    const ActionField af(DiskMap(1.0, {h}));
    const auto direct = af.calabi_direct(1e-9);
    EXPECT_TRUE(direct.converged);
    EXPECT_NEAR(af.calabi().value, direct.value, 1e-8);
}

TEST(ComposeAction, IdentityFactors) {
    const auto phi = cubic_twist(1.0);
    const auto id = DiskMap::identity(1.0);
    const ActionField single(phi);
    const auto right = compose_action(phi, id);
    const auto left = compose_action(id, phi);
    for (Vec2 z : {Vec2{0.0, 0.0}, Vec2{0.3, 0.1}, Vec2{-0.6, 0.5}}) {
        EXPECT_NEAR(right(z), single(z), 1e-14);
        EXPECT_NEAR(left(z), single(z), 1e-14);
    }
}

TEST(ComposeAction, TwoTwistsAddProfiles) {
    const auto p1 = RadialFunction::bump_power(-1.0, 1.0, 3);
    const auto p2 = RadialFunction::bump_power(0.6, 0.7, 4);
    const auto sum = p1 + p2;
    const RadialTwist closed{sum, 1.0};
    const auto comp = compose_action(DiskMap::twist(1.0, p1), DiskMap::twist(1.0, p2));
    for (double r : {0.0, 0.2, 0.5, 0.69, 0.85}) {
        const Vec2 z{r * std::cos(1.0), r * std::sin(1.0)};
        EXPECT_NEAR(comp(z), radial_twist_action(closed, r).value, 1e-9);
    }
}

TEST(ComposeAction, MatchesDirectAction) {
    const auto phi = cubic_twist(1.2);
    const auto psi = hamiltonian_map();
    const auto comp = compose_action(phi, psi);
    const ActionField direct(phi.compose(psi));
    std::mt19937_64 rng(17);
    for (int i = 0; i < 6; ++i) {
        const Vec2 z = random_point(rng, 0.95);
        EXPECT_NEAR(comp(z), direct(z), 1e-7);
    }
}

TEST(Rescale, ScalingLaws) {
    for (const auto& m : {cubic_twist(1.5), hamiltonian_map()}) {
        for (double f : {0.5, 2.0}) {
            const auto mr = m.rescaled(f);
            EXPECT_DOUBLE_EQ(mr.radius(), f * m.radius());
            const ActionField a(m), ar(mr);
            for (Vec2 z : {Vec2{0.0, 0.0}, Vec2{0.2, -0.3}, Vec2{0.5, 0.4}}) {
                EXPECT_LT(numerics::norm(mr(f * z) - f * m(z)), 1e-10);
                EXPECT_NEAR(ar(f * z), f * f * a(z), 1e-8);
            }
            const double cal = a.calabi().value;
            EXPECT_NEAR(ar.calabi().value, std::pow(f, 4) * cal, 1e-7 * std::abs(std::pow(f, 4) * cal));
        }
    }
}

TEST(Rescale, UnitFactorAndIdentity) {
    const auto m = cubic_twist(1.0);
    const auto same = m.rescaled(1.0);
    EXPECT_EQ(same(Vec2{0.3, 0.2}), m(Vec2{0.3, 0.2}));
    EXPECT_TRUE(DiskMap::identity(1.0).rescaled(3.0).is_identity());
    const ActionField a(cubic_twist(1.0)), a2(cubic_twist(1.0).rescaled(2.0));
    EXPECT_NEAR(a2(Vec2{0, 0}), 4.0 * a(Vec2{0, 0}), 1e-10);
    EXPECT_NEAR(a2.calabi().value, 16.0 * a.calabi().value, 1e-9);
    EXPECT_THROW(m.rescaled(0.0), std::invalid_argument);
}

TEST(PeriodicPoints, IdentityFixesEveryGridPoint) {
    const auto pts = periodic_points(DiskMap::identity(1.0), {3, 4});
    EXPECT_EQ(pts.size(), polar_seed_grid(1.0, 4).size());
    for (const auto& p : pts) EXPECT_EQ(p.period, 1);
}

TEST(PeriodicPoints, ResonantCircleOfPeriodThree) {
    const double c = 3.0;
    const auto tw = cubic_twist(c);
    const auto& prim = std::get<RadialTwist>(tw.primitives()[0]);
    const auto res = numerics::find_root_bracketed([&](double r) { return prim.profile(r) + two_pi / 3.0; }, 0.0, 1.0);
    ASSERT_TRUE(res.converged);
    const double r_star = res.x;
    const auto pts = periodic_points(tw, {3, 12});
    int three = 0;
    for (const auto& p : pts) {
        if (p.period == 2) ADD_FAILURE() << "unexpected period-2 point";
        if (p.period != 3) continue;
        ++three;
        EXPECT_NEAR(numerics::norm(p.point), r_star, 1e-9);
        EXPECT_LT(numerics::norm(iterate(tw, p.point, 3) - p.point), 1e-9);
        EXPECT_GT(numerics::norm(tw(p.point) - p.point), 1e-3);
    }
    EXPECT_GT(three, 0);
}

TEST(PeriodicPoints, NegativeTwistFixesOnlyOrigin) {
    const double c = 3.0;  // rho(0) = -3 > -2pi
    const auto tw = cubic_twist(c);
    const auto& prim = std::get<RadialTwist>(tw.primitives()[0]);
    for (int i = 1; i < 10000; ++i) {
        const double rho = prim.profile(i / 10000.0);
        ASSERT_LT(rho, 0.0);
        ASSERT_GT(rho, -two_pi);
    }
    const auto pts = periodic_points(tw, {1, 10});
    int isolated = 0;
    for (const auto& p : pts) {
        if (p.kind == PointKind::isolated) {
            ++isolated;
            EXPECT_LT(numerics::norm(p.point), 1e-12);
        } else if (p.kind == PointKind::degenerate) {
            EXPECT_GT(numerics::norm(p.point), 0.95);
        }
    }
    EXPECT_EQ(isolated, 1);
}

TEST(PeriodicPoints, FixedPointActionIndependentOfPrimitive) {
    const auto m = cubic_twist(2.0).compose(hamiltonian_map());
    const ActionField a0(m), a1(m, shifted_primitive());
    const auto p0 = periodic_points(m, {1, 6}, &a0);
    const auto p1 = periodic_points(m, {1, 6}, &a1);
    ASSERT_EQ(p0.size(), p1.size());
    int interior = 0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
        EXPECT_LT(numerics::norm(p0[i].point - p1[i].point), 1e-12);
        EXPECT_NEAR(p0[i].action_sum, p1[i].action_sum, 2e-8);
        if (p0[i].kind != PointKind::outside_support) ++interior;
    }
    EXPECT_GT(interior, 0);
}
