#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include "systolic/numerics/vec2.hpp"

namespace systolic::numerics {

struct RootSpec {
    double tol = 1e-12;           // residual tolerance
    double step_tol = 1e-13;      // step-size tolerance (relative to max(1, |x|))
    std::size_t max_iterations = 100;
};

struct Root1d {
    double x = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::string failure;
};

/// Root of f in [a, b] given a sign change, via TOMS 748.
inline Root1d find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                                  const RootSpec& spec = {}) {
    Root1d out;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0, true, {}};
    if (fb == 0.0) return {b, 0.0, 0, true, {}};
    if ((fa > 0.0) == (fb > 0.0)) {
        out.failure = "no sign change on bracket";
        return out;
    }
    std::uintmax_t iters = spec.max_iterations;
    const auto tol = boost::math::tools::eps_tolerance<double>(52);
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    const double flo = f(lo), fhi = f(hi);
    out.x = std::abs(flo) <= std::abs(fhi) ? lo : hi;
    out.residual = std::min(std::abs(flo), std::abs(fhi));
    out.iterations = static_cast<std::size_t>(iters);
    out.converged = iters < spec.max_iterations || std::abs(hi - lo) <= 4e-16 * std::max(1.0, std::abs(out.x));
    if (!out.converged) out.failure = "iteration budget exhausted";
    return out;
}

/// Newton iteration from a seed with a central-difference derivative.
inline Root1d find_root_1d(const std::function<double(double)>& f, double seed, const RootSpec& spec = {}) {
    Root1d out;
    double x = seed;
    double fx = f(x);
    for (std::size_t it = 0; it < spec.max_iterations; ++it) {
        out.iterations = it;
        if (!std::isfinite(fx)) {
            out.failure = "non-finite residual";
            return out;
        }
        if (std::abs(fx) <= spec.tol) {
            out.x = x;
            out.residual = std::abs(fx);
            out.converged = true;
            return out;
        }
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        const double df = (f(x + h) - f(x - h)) / (2.0 * h);
        if (df == 0.0 || !std::isfinite(df)) {
            out.failure = "singular derivative";
            return out;
        }
        const double step = fx / df;
        x -= step;
        fx = f(x);
        if (std::abs(step) <= spec.step_tol * std::max(1.0, std::abs(x)) && std::abs(fx) <= spec.tol * 1e3) {
            out.x = x;
            out.residual = std::abs(fx);
            out.converged = true;
            out.iterations = it + 1;
            return out;
        }
    }
    out.x = x;
    out.residual = std::abs(fx);
    out.failure = "iteration budget exhausted";
    return out;
}

struct FixedPoint2d {
    Vec2 z;
    double residual = 0.0;
    double last_step = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::string failure;
};

/// A map value together with its differential.
using MapWithJacobian = std::function<std::pair<Vec2, Mat2>(Vec2)>;

/**
 * Newton iteration for map(z) = z. The linear solve uses the SVD
 * pseudo-inverse of (Dmap - I), so circles of fixed points (where the
 * linearisation has a kernel) are approached along the normal direction
 * instead of producing a singular-Jacobian failure.
 */
inline FixedPoint2d find_fixed_point_2d(const MapWithJacobian& map, Vec2 seed, const RootSpec& spec = {},
                                        double max_step = std::numeric_limits<double>::infinity()) {
    FixedPoint2d out;
    Vec2 z = seed;
    for (std::size_t it = 0; it <= spec.max_iterations; ++it) {
        const auto [fz, jac] = map(z);
        const Vec2 res = fz - z;
        const double rn = norm(res);
        out.iterations = it;
        out.z = z;
        out.residual = rn;
        if (!std::isfinite(rn)) {
            out.failure = "non-finite residual";
            return out;
        }
        if (rn <= spec.tol) {
            out.converged = true;
            return out;
        }
        if (it == spec.max_iterations) break;
        Eigen::Matrix2d m;
        m << jac.a - 1.0, jac.b, jac.c, jac.d - 1.0;
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        if (!(s(0) > 0.0)) {
            out.failure = "singular Jacobian";
            return out;
        }
        const double cut = 1e-10 * s(0);
        Eigen::Vector2d rhs(res.x, res.y);
        Eigen::Vector2d ut = svd.matrixU().transpose() * rhs;
        for (int i = 0; i < 2; ++i) ut(i) = s(i) > cut ? ut(i) / s(i) : 0.0;
        const Eigen::Vector2d dz = svd.matrixV() * ut;
        Vec2 step{-dz(0), -dz(1)};
        const double sn = norm(step);
        if (sn > max_step) step = (max_step / sn) * step;
        z = z + step;
        out.last_step = norm(step);
    }
    out.failure = "iteration budget exhausted";
    return out;
}

/// Convenience overload: Jacobian by central differences.
inline FixedPoint2d find_fixed_point_2d(const std::function<Vec2(Vec2)>& map, Vec2 seed, const RootSpec& spec = {}) {
    const MapWithJacobian wrapped = [&](Vec2 z) {
        const double h = 1e-6 * std::max(1.0, norm(z));
        const Vec2 fx = (1.0 / (2.0 * h)) * (map(z + Vec2{h, 0.0}) - map(z - Vec2{h, 0.0}));
        const Vec2 fy = (1.0 / (2.0 * h)) * (map(z + Vec2{0.0, h}) - map(z - Vec2{0.0, h}));
        return std::pair<Vec2, Mat2>{map(z), Mat2{fx.x, fy.x, fx.y, fy.y}};
    };
    return find_fixed_point_2d(wrapped, seed, spec);
}

}  // namespace systolic::numerics
