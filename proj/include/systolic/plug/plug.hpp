#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/diskmap/action.hpp"
#include "systolic/diskmap/disk_map.hpp"
#include "systolic/diskmap/periodic_points.hpp"

namespace systolic::plug {

using disk::ActionField;
using disk::DiskMap;
using numerics::Integral;
using numerics::Vec2;

/// A non-positive return time, with the point where it was found.
struct PlugRejected : std::domain_error {
    Vec2 witness;
    double tau;
    PlugRejected(Vec2 w, double t)
        : std::domain_error("plug rejected: return time " + std::to_string(t) + " <= 0 at (" + std::to_string(w.x) +
                            ", " + std::to_string(w.y) + ")"),
          witness(w), tau(t) {}
};

/// Grid for locating the minimum of sigma: polar rings, then a compass search from the best node.
struct MinSearch {
    int rings = 12;
    double step_tol = 1e-7;
};

struct Extremum {
    Vec2 point;
    double value = std::numeric_limits<double>::infinity();
};

/// Approximate minimum of a function on the closed disk of radius R.
template <class F>
Extremum minimize_on_disk(F&& f, double radius, const MinSearch& search) {
    Extremum best;
    for (const auto& z : disk::polar_seed_grid(radius, search.rings)) {
        const double v = f(z);
        if (v < best.value) best = {z, v};
    }
    double step = radius / (2.0 * search.rings);
    const std::array<Vec2, 4> dirs{Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}};
    while (step > search.step_tol * radius) {
        bool moved = false;
        for (const auto& d : dirs) {
            Vec2 z = best.point + step * d;
            const double r = numerics::norm(z);
            if (r > radius) z = (radius / r) * z;
            const double v = f(z);
            if (v < best.value) {
                best = {z, v};
                moved = true;
                break;
            }
        }
        if (!moved) step *= 0.5;
    }
    return best;
}

/**
 * The return-system model of a plug over the disk of radius r: first return
 * map phi and return time tau = L + sigma, sigma the action for lambda0. The
 * suspension form itself is not built; this pair is what the plug is.
 */
class PlugSystem {
public:
    PlugSystem(DiskMap map, double fiber_length, const MinSearch& search = {})
        : action_(std::move(map)), fiber_length_(fiber_length) {
        if (!(fiber_length_ > 0.0) || !std::isfinite(fiber_length_))
            throw std::invalid_argument("PlugSystem: fiber length must be positive");
        const auto m = minimize_on_disk([&](Vec2 z) { return action_(z); }, action_.map().radius(), search);
        min_action_ = m;
        if (!(fiber_length_ + m.value > 0.0)) throw PlugRejected(m.point, fiber_length_ + m.value);
    }

    const DiskMap& map() const { return action_.map(); }
    const ActionField& action() const { return action_; }
    double radius() const { return action_.map().radius(); }
    double fiber_length() const { return fiber_length_; }

    double tau(Vec2 z) const { return fiber_length_ + action_(z); }

    /// Where the grid search found the smallest action.
    const Extremum& min_action() const { return min_action_; }

    /// L pi r^2 + CAL(phi).
    Integral volume() const {
        Integral cal = action_.calabi();
        cal.value += fiber_length_ * numerics::pi * radius() * radius();
        return cal;
    }

    /// The integral of tau over the disk, computed directly.
    Integral tau_integral(const numerics::QuadratureSpec& spec = {1e-10, 1e-10, 4000}) const {
        return numerics::integrate_disk([&](Vec2 z) { return tau(z); }, radius(), spec, map().radial_breaks());
    }

private:
    ActionField action_;
    double fiber_length_;
    Extremum min_action_;
};

inline PlugSystem make_plug(DiskMap map, double fiber_length, const MinSearch& search = {}) {
    return PlugSystem(std::move(map), fiber_length, search);
}

/// (z, s) -> (factor z, factor^2 s): radius factor r, fiber factor^2 L, tau_new(z) = factor^2 tau(z / factor).
inline PlugSystem rescale_plug(const PlugSystem& plug, double factor, const MinSearch& search = {}) {
    if (!(factor > 0.0)) throw std::invalid_argument("rescale factor must be positive");
    return PlugSystem(plug.map().rescaled(factor), factor * factor * plug.fiber_length(), search);
}

struct PlugOrbit {
    disk::PeriodicOrbit orbit;
    double period = 0.0;  // sum of tau along the orbit
};

/// Closed orbits of the plug from periodic orbits of phi: T = k L + sum of sigma along the orbit.
inline std::vector<PlugOrbit> orbit_periods(const PlugSystem& plug, const disk::PeriodicSearch& search) {
    std::vector<PlugOrbit> out;
    for (auto& o : disk::periodic_points(plug.map(), search, &plug.action())) {
        const double t = o.period * plug.fiber_length() + o.action_sum;
        out.push_back({std::move(o), t});
    }
    return out;
}

}  // namespace systolic::plug
