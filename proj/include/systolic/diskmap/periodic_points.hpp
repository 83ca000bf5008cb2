#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/diskmap/action.hpp"
#include "systolic/diskmap/disk_map.hpp"
#include "systolic/numerics/roots.hpp"

namespace systolic::disk {

struct PeriodicSearch {
    int k_max = 1;
    int rings = 12;               // polar seed grid: center plus `rings` circles
    double accept_residual = 1e-9;
    std::size_t max_newton = 200;
};

enum class PointKind {
    outside_support,  // the map is the identity near the point
    isolated,         // D phi^k - I is not the zero matrix
    degenerate,       // phi^k - id vanishes to first order (flat region of the map)
};

inline const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::outside_support: return "outside-support";
        case PointKind::isolated: return "isolated";
        case PointKind::degenerate: return "degenerate";
    }
    return "?";
}

struct PeriodicOrbit {
    Vec2 point;
    int period = 1;
    std::vector<Vec2> orbit;  // point, phi(point), ..., phi^{k-1}(point)
    double action_sum = 0.0;  // sum of sigma over the orbit
    double residual = 0.0;
    PointKind kind = PointKind::isolated;
};

/// Seeds: the center and rings i = 1..n of radius R*i/n carrying max(6, 6i) points.
inline std::vector<Vec2> polar_seed_grid(double radius, int rings) {
    std::vector<Vec2> out{{0.0, 0.0}};
    for (int i = 1; i <= rings; ++i) {
        const double r = radius * i / rings;
        const int m = std::max(6, 6 * i);
        for (int j = 0; j < m; ++j) {
            const double th = numerics::two_pi * (j + 0.5 * (i % 2)) / m;
            out.push_back({r * std::cos(th), r * std::sin(th)});
        }
    }
    return out;
}

inline std::pair<Vec2, Mat2> iterate_with_differential(const DiskMap& map, Vec2 z, int k) {
    Mat2 d = Mat2::identity();
    for (int i = 0; i < k; ++i) {
        const auto [w, dw] = map.evaluate_with_differential(z);
        d = dw * d;
        z = w;
    }
    return {z, d};
}

inline Vec2 iterate(const DiskMap& map, Vec2 z, int k) {
    for (int i = 0; i < k; ++i) z = map(z);
    return z;
}

/**
 * Periodic points of minimal period k <= k_max, from Newton refinement of
 * phi^k - id started at every seed of a polar grid. Seeds outside the support
 * are reported as fixed points directly. Completeness is heuristic: an orbit
 * whose basin misses every seed is not found.
 */
inline std::vector<PeriodicOrbit> periodic_points(const DiskMap& map, const PeriodicSearch& search,
                                                  const ActionField* action = nullptr) {
    if (search.k_max < 1) throw std::invalid_argument("periodic_points: k_max must be >= 1");
    if (search.rings < 1) throw std::invalid_argument("periodic_points: need at least one seed ring");
    const double R = map.radius();
    const double S = map.support();
    const auto seeds = polar_seed_grid(R, search.rings);
    const double same = 1e-7 * std::max(1.0, R);

    std::vector<PeriodicOrbit> found;
    const auto known = [&](Vec2 z, int k) {
        for (const auto& o : found) {
            if (o.period != k) continue;
            for (const auto& w : o.orbit)
                if (numerics::norm(w - z) < same) return true;
        }
        return false;
    };
    const auto orbit_action = [&](const std::vector<Vec2>& orbit) {
        if (!action) return 0.0;
        double s = 0.0;
        for (const auto& w : orbit) s += (*action)(w);
        return s;
    };

    for (const auto& z : seeds) {
        if (numerics::norm(z) >= S) {
            PeriodicOrbit o;
            o.point = z;
            o.period = 1;
            o.orbit = {z};
            o.kind = PointKind::outside_support;
            found.push_back(o);
        }
    }

    for (int k = 1; k <= search.k_max; ++k) {
        if (S == 0.0) break;
        const numerics::MapWithJacobian fk = [&](Vec2 z) {
            const double r = numerics::norm(z);
            if (r > R) z = (R / r) * z;
            return iterate_with_differential(map, z, k);
        };
        numerics::RootSpec spec;
        spec.tol = 1e-14 * std::max(1.0, R);
        spec.max_iterations = search.max_newton;
        for (const auto& seed : seeds) {
            if (numerics::norm(seed) >= S) continue;
            numerics::FixedPoint2d fp;
            try {
                fp = numerics::find_fixed_point_2d(fk, seed, spec, 0.25 * R);
            } catch (const std::exception&) {
                continue;
            }
            if (!(fp.residual < search.accept_residual)) continue;
            Vec2 z = fp.z;
            if (numerics::norm(z) > R) continue;
            if (numerics::norm(z) >= S * (1.0 - 1e-6)) continue;

            bool minimal = true;
            for (int j = 1; j < k && minimal; ++j)
                if (k % j == 0 && numerics::norm(iterate(map, z, j) - z) < search.accept_residual) minimal = false;
            if (!minimal || known(z, k)) continue;

            PeriodicOrbit o;
            o.point = z;
            o.period = k;
            o.residual = fp.residual;
            o.orbit.push_back(z);
            for (int j = 1; j < k; ++j) o.orbit.push_back(map(o.orbit.back()));
            const Mat2 dk = iterate_with_differential(map, z, k).second - Mat2::identity();
            o.kind = numerics::frobenius(dk) < 1e-6 ? PointKind::degenerate : PointKind::isolated;
            found.push_back(o);
        }
    }

    for (auto& o : found) o.action_sum = o.kind == PointKind::outside_support ? 0.0 : orbit_action(o.orbit);
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.period != b.period) return a.period < b.period;
        const double ra = numerics::norm(a.point), rb = numerics::norm(b.point);
        if (ra != rb) return ra < rb;
        return std::atan2(a.point.y, a.point.x) < std::atan2(b.point.y, b.point.x);
    });
    return found;
}

}  // namespace systolic::disk
