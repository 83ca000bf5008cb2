#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "systolic/plug/plug.hpp"

namespace systolic::plug {

struct AxiomResult {
    std::string name;
    bool pass = true;
    double margin = 0.0;  // >= 0 when the axiom holds
    std::optional<Vec2> witness;
    std::string note;
};

struct PlugReport {
    std::vector<AxiomResult> axioms;
    int n = 0;  // only for the (b) list
    disk::PeriodicSearch search;
    MinSearch min_search;
    double observed_tmin = std::numeric_limits<double>::infinity();
    double volume = 0.0;
    double calabi = 0.0;
    std::vector<std::string> warnings;

    bool all_pass() const {
        return std::all_of(axioms.begin(), axioms.end(), [](const auto& a) { return a.pass; });
    }
    const AxiomResult* first_failure() const {
        for (const auto& a : axioms)
            if (!a.pass) return &a;
        return nullptr;
    }
    const AxiomResult& get(const std::string& name) const {
        for (const auto& a : axioms)
            if (a.name == name) return a;
        throw std::out_of_range("no axiom " + name);
    }
};

/// Tolerance for comparisons of computed periods and actions against exact thresholds.
inline constexpr double period_slack = 1e-10;

/**
 * (b1) sigma >= -L + L/n; (b2) CAL < -L pi r^2 + eps; (b3) fixed points have
 * sigma >= 0; (b4) every non-fixed periodic point has period >= n. b3 and b4
 * hold only up to the completeness of the periodic-point search.
 */
inline PlugReport verify_b(const DiskMap& map, double L, int n, double eps, const disk::PeriodicSearch& search,
                           const MinSearch& min_search = {}) {
    if (!(L > 0.0) || n < 1 || !(eps > 0.0)) throw std::invalid_argument("verify_b: need L > 0, n >= 1, eps > 0");
    PlugReport rep;
    rep.n = n;
    rep.search = search;
    rep.min_search = min_search;
    if (search.k_max < n - 1)
        rep.warnings.push_back("k_max = " + std::to_string(search.k_max) + " < n - 1: periods in (k_max, n) unchecked");
    const ActionField af(map);
    const double R = map.radius();

    const auto m = minimize_on_disk([&](Vec2 z) { return af(z); }, R, min_search);
    const double floor_b1 = -L + L / n;
    rep.axioms.push_back({"b1", m.value >= floor_b1 - period_slack, m.value - floor_b1, m.point,
                          "min sigma by grid and compass search"});

    const double cal = af.calabi().value;
    rep.calabi = cal;
    rep.volume = L * numerics::pi * R * R + cal;
    const double cap = -L * numerics::pi * R * R + eps;
    rep.axioms.push_back({"b2", cal < cap, cap - cal, std::nullopt, "CAL by quadrature"});

    const auto orbits = disk::periodic_points(map, search, &af);
    AxiomResult b3{"b3", true, std::numeric_limits<double>::infinity(), std::nullopt,
                   "fixed points found by Newton search; complete only up to the seed grid"};
    AxiomResult b4{"b4", true, std::numeric_limits<double>::infinity(), std::nullopt,
                   "periodic points with k <= k_max; complete only up to the search"};
    for (const auto& o : orbits) {
        rep.observed_tmin = std::min(rep.observed_tmin, o.period * L + o.action_sum);
        if (o.period == 1) {
            if (o.action_sum < b3.margin) {
                b3.margin = o.action_sum;
                b3.witness = o.point;
            }
        } else if (o.period < n) {
            const double mg = static_cast<double>(o.period - n);
            if (mg < b4.margin) {
                b4.margin = mg;
                b4.witness = o.point;
            }
        }
    }
    b3.pass = b3.margin >= -period_slack;
    b4.pass = !(b4.margin < 0.0);
    if (std::isinf(b4.margin)) b4.margin = static_cast<double>(search.k_max + 1 - n);
    rep.axioms.push_back(b3);
    rep.axioms.push_back(b4);
    return rep;
}

/**
 * (a3) closed orbits have period >= 1 and (a4) the volume pi r^2 + CAL is
 * below eps, for a plug normalised to L = 1. (a1) and (a2) are properties of
 * the suspension that the return-system model carries by construction.
 */
inline PlugReport verify_a(const PlugSystem& plug, double eps, const disk::PeriodicSearch& search) {
    if (std::abs(plug.fiber_length() - 1.0) > 1e-15) throw std::invalid_argument("verify_a: needs fiber length 1");
    if (!(eps > 0.0)) throw std::invalid_argument("verify_a: need eps > 0");
    PlugReport rep;
    rep.search = search;
    rep.axioms.push_back({"a1", true, 0.0, std::nullopt, "holds by model: lambda0 + ds near the boundary"});
    rep.axioms.push_back({"a2", true, 0.0, std::nullopt, "holds by model: isotopic to lambda0 + ds"});

    AxiomResult a3{"a3", true, std::numeric_limits<double>::infinity(), std::nullopt,
                   "periods from sum of tau over periodic orbits with k <= k_max"};
    for (const auto& o : orbit_periods(plug, search)) {
        rep.observed_tmin = std::min(rep.observed_tmin, o.period);
        if (o.period - 1.0 < a3.margin) {
            a3.margin = o.period - 1.0;
            a3.witness = o.orbit.point;
        }
    }
    a3.pass = a3.margin >= -period_slack;
    rep.axioms.push_back(a3);

    const auto vol = plug.volume();
    rep.volume = vol.value;
    rep.calabi = vol.value - numerics::pi * plug.radius() * plug.radius();
    rep.axioms.push_back({"a4", vol.value < eps, eps - vol.value, std::nullopt, "volume pi r^2 + CAL"});
    return rep;
}

}  // namespace systolic::plug
