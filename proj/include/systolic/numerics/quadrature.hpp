#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "systolic/numerics/vec2.hpp"

namespace systolic::numerics {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 2000;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("quadrature tolerances must be positive");
        if (max_subdivisions == 0) throw std::invalid_argument("max_subdivisions must be >= 1");
    }

    double target(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

struct Integral {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    std::size_t evaluations = 0;
};

namespace detail {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const {
        if (error != o.error) return error < o.error;
        return a > o.a;
    }
};

inline Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    double err = 0.0;
    const double v = GK::integrate(f, a, b, 0, 0.0, &err);
    return {a, b, v, err};
}

}  // namespace detail

/**
 * Globally adaptive Gauss-Kronrod (10/21) quadrature.
 *
 * The panel with the largest error estimate is bisected until the summed
 * error drops below max(abs_tol, rel_tol*|value|). Breakpoints inside (a, b)
 * start the subdivision so that kinks of piecewise integrands sit on panel
 * edges.
 */
inline Integral integrate_1d(const std::function<double(double)>& f, double a, double b,
                             const QuadratureSpec& spec = {}, std::span<const double> breakpoints = {}) {
    spec.validate();
    if (!(a <= b)) throw std::invalid_argument("integrate_1d: need a <= b");
    Integral out;
    if (a == b) return out;

    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<detail::Panel> heap;
    double value = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto p = detail::kronrod_panel(f, edges[i], edges[i + 1]);
        value += p.value;
        error += p.error;
        out.evaluations += 21;
        heap.push(p);
    }
    std::size_t panels = heap.size();
    while (error > spec.target(value)) {
        if (panels >= spec.max_subdivisions) {
            out.converged = false;
            break;
        }
        const detail::Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;
            break;
        }
        heap.pop();
        const auto left = detail::kronrod_panel(f, worst.a, mid);
        const auto right = detail::kronrod_panel(f, mid, worst.b);
        out.evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // Re-sum in a fixed order to keep the result independent of heap history rounding.
    std::vector<detail::Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& p, const auto& q) { return p.a < q.a; });
    value = 0.0;
    error = 0.0;
    for (const auto& p : all) {
        value += p.value;
        error += p.error;
    }
    out.value = value;
    out.error = error;
    if (!std::isfinite(value)) out.converged = false;
    return out;
}

/// Periodic trapezoid rule in the angle, doubling from 16 nodes until two
/// successive levels agree to the requested tolerance.
inline Integral integrate_periodic(const std::function<double(double)>& g, const QuadratureSpec& spec = {},
                                   std::size_t max_nodes = 8192) {
    std::size_t n = 16;
    double h = two_pi / static_cast<double>(n);
    double sum = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = g(h * static_cast<double>(i));
        sum += v;
        abs_sum += std::abs(v);
    }
    Integral out;
    out.evaluations = n;
    double value = h * sum;
    while (true) {
        if (2 * n > max_nodes) {
            out.converged = false;
            break;
        }
        double odd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = g(h * (static_cast<double>(i) + 0.5));
            odd += v;
            abs_sum += std::abs(v);
        }
        out.evaluations += n;
        sum += odd;
        n *= 2;
        h *= 0.5;
        const double next = h * sum;
        const double diff = std::abs(next - value);
        value = next;
        const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * h * abs_sum;
        if (diff <= std::max(0.1 * spec.target(value), roundoff)) {
            out.error = diff;
            break;
        }
        out.error = diff;
    }
    out.value = value;
    return out;
}

/// ∫₀^{2π} ∫₀^R g(r, θ) dr dθ with the radial integral outermost. The caller
/// supplies any Jacobian factor.
inline Integral integrate_polar(const std::function<double(double, double)>& g, double radius,
                                const QuadratureSpec& spec = {}, std::span<const double> radial_breaks = {}) {
    if (!(radius >= 0.0)) throw std::invalid_argument("integrate_polar: radius must be >= 0");
    QuadratureSpec inner = spec;
    inner.abs_tol = spec.abs_tol / std::max(1.0, 10.0 * radius);
    inner.rel_tol = spec.rel_tol * 0.1;
    bool inner_ok = true;
    std::size_t evals = 0;
    auto radial = [&](double r) {
        const Integral ring = integrate_periodic([&](double th) { return g(r, th); }, inner);
        inner_ok = inner_ok && ring.converged;
        evals += ring.evaluations;
        return ring.value;
    };
    Integral out = integrate_1d(radial, 0.0, radius, spec, radial_breaks);
    out.converged = out.converged && inner_ok;
    out.evaluations = evals;
    return out;
}

/// ∫∫ f dx dy over the disk of the given radius.
inline Integral integrate_disk(const std::function<double(Vec2)>& f, double radius, const QuadratureSpec& spec = {},
                               std::span<const double> radial_breaks = {}) {
    return integrate_polar(
        [&](double r, double th) { return r * f(Vec2{r * std::cos(th), r * std::sin(th)}); }, radius, spec,
        radial_breaks);
}

}  // namespace systolic::numerics
