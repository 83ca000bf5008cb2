#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/numerics/dual.hpp"
#include "systolic/numerics/ode.hpp"
#include "systolic/numerics/radial_function.hpp"
#include "systolic/numerics/vec2.hpp"

namespace systolic::rotorus {

using numerics::RadialFunction;
using numerics::two_pi;

/// A point of the solid torus in (radius, disk angle, core angle); angles are not wrapped.
struct TorusPoint {
    double r = 0.0;
    double disk_angle = 0.0;
    double core_angle = 0.0;
};

/// Angular velocities of the Reeb flow on the torus of a given radius (dr/dt is always 0).
struct Velocities {
    double disk = 0.0;
    double core = 0.0;
};

/**
 * kappa * (c(r) dphi_disk + d(r) dphi_core) on (disk of radius R) x (circle of length
 * core_period); the disk angle has period 2pi. c and d are even; smoothness on the
 * core requires c(0) = c'(0) = 0 < c''(0) and d(0) != 0.
 */
class RotForm {
public:
    static constexpr double disk_period = two_pi;

    RotForm(double radius, double core_period, double kappa, RadialFunction c, RadialFunction d)
        : radius_(radius), core_period_(core_period), kappa_(kappa), c_(std::move(c)), d_(std::move(d)) {
        if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw std::invalid_argument("RotForm: radius must be positive");
        if (!(core_period_ > 0.0) || !std::isfinite(core_period_))
            throw std::invalid_argument("RotForm: core period must be positive");
        if (!(kappa_ > 0.0) || !std::isfinite(kappa_)) throw std::invalid_argument("RotForm: kappa must be positive");
        if (c_.parity() != numerics::Parity::even || d_.parity() != numerics::Parity::even)
            throw std::invalid_argument("RotForm: c and d must be tagged even");
        const auto c0 = c_.jet(0.0);
        if (std::abs(c0.v) > 1e-12 || std::abs(c0.d1) > 1e-12 || !(c0.d2 > 0.0))
            throw std::invalid_argument("RotForm: need c(0) = c'(0) = 0 < c''(0) for smoothness on the core");
        if (d_(0.0) == 0.0) throw std::invalid_argument("RotForm: d(0) must be nonzero");
        const auto bad = first_contact_failure();
        if (bad >= 0.0)
            throw std::domain_error("RotForm: contact condition fails at r = " + std::to_string(bad));
    }

    double radius() const { return radius_; }
    double core_period() const { return core_period_; }
    double kappa() const { return kappa_; }
    const RadialFunction& c() const { return c_; }
    const RadialFunction& d() const { return d_; }

    /// kappa^2 (c'd - c d'): alpha ^ dalpha = W dr ^ dphi_disk ^ dphi_core.
    double wronskian(double r) const {
        const auto c = c_.jet(r), d = d_.jet(r);
        return kappa_ * kappa_ * (c.d1 * d.v - c.v * d.d1);
    }

    /// W(r)/r, with its limit kappa^2 c''(0) d(0) on the core.
    double wronskian_over_r(double r) const {
        if (r > core_cutoff()) return wronskian(r) / r;
        return kappa_ * kappa_ * c_.jet(0.0).d2 * d_(0.0);
    }

    /// (dphi_disk/dt, dphi_core/dt) = (-d', c') / (kappa (c'd - cd')).
    Velocities velocities(double r) const {
        if (r <= core_cutoff()) {
            const double c2 = c_.jet(0.0).d2, d0 = d_(0.0), d2 = d_.jet(0.0).d2;
            return {-d2 / (kappa_ * c2 * d0), 1.0 / (kappa_ * d0)};
        }
        const auto c = c_.jet(r), d = d_.jet(r);
        const double w = c.d1 * d.v - c.v * d.d1;
        if (!(w > 0.0)) throw std::domain_error("Reeb field: contact condition fails at r = " + std::to_string(r));
        return {-d.d1 / (kappa_ * w), c.d1 / (kappa_ * w)};
    }

    /// Period of the core circle r = 0.
    double core_orbit_period() const { return core_period_ * kappa_ * std::abs(d_(0.0)); }

    /// First radius of a uniform grid (plus knots) where W/r <= 0, or -1 if none.
    double first_contact_failure(std::size_t grid = 2000) const {
        std::vector<double> rs;
        for (std::size_t i = 0; i <= grid; ++i) rs.push_back(radius_ * static_cast<double>(i) / static_cast<double>(grid));
        for (double k : c_.knots()) if (k > 0.0 && k <= radius_) rs.push_back(k);
        for (double k : d_.knots()) if (k > 0.0 && k <= radius_) rs.push_back(k);
        std::sort(rs.begin(), rs.end());
        for (double r : rs)
            if (!(wronskian_over_r(r) > 0.0)) return r;
        return -1.0;
    }

private:
    double core_cutoff() const { return 1e-9 * radius_; }

    double radius_;
    double core_period_;
    double kappa_;
    RadialFunction c_;
    RadialFunction d_;
};

/// The Reeb vector in (r, disk angle, core angle) components.
inline std::array<double, 3> reeb_field(const RotForm& form, const TorusPoint& p) {
    const auto v = form.velocities(p.r);
    return {0.0, v.disk, v.core};
}

/// Closed-form flow: both angles advance linearly at rates fixed by the radius.
inline TorusPoint exact_flow(const RotForm& form, const TorusPoint& start, double time) {
    const auto v = form.velocities(start.r);
    return {start.r, start.disk_angle + v.disk * time, start.core_angle + v.core * time};
}

/// alpha and its curl in Cartesian coordinates (x, y, s) with s the core angle.
struct CartesianForm {
    std::array<double, 3> alpha{};
    std::array<double, 3> curl{};  // dalpha(U, V) = curl . (U x V)
};

inline CartesianForm cartesian_form(const RotForm& form, double x, double y, double s) {
    using D = numerics::Dual<3>;
    const D X = D::variable(x, 0), Y = D::variable(y, 1);
    const D r2 = X * X + Y * Y;
    const D r = numerics::sqrt(r2);
    const D c = form.c()(r), d = form.d()(r);
    const double k = form.kappa();
    const D ax = D(-k) * c * Y / r2, ay = D(k) * c * X / r2, as = D(k) * d;
    (void)s;  // the form does not depend on the core angle
    CartesianForm out;
    out.alpha = {ax.v, ay.v, as.v};
    out.curl = {as.d[1] - ay.d[2], ax.d[2] - as.d[0], ay.d[0] - ax.d[1]};
    return out;
}

/// Reeb vector in Cartesian components at (x, y, s).
inline std::array<double, 3> reeb_cartesian(const RotForm& form, double x, double y) {
    const auto v = form.velocities(std::hypot(x, y));
    return {-v.disk * y, v.disk * x, v.core};
}

struct OdeCheck {
    double max_deviation = 0.0;  // sup over checkpoints of |ode - exact| in (x, y, s)
    double radius_drift = 0.0;
    bool ok = true;
    std::string failure;
};

/**
 * Integrates the Cartesian Reeb field with the adaptive integrator and compares
 * against exact_flow at `checkpoints` equally spaced times.
 */
inline OdeCheck ode_check(const RotForm& form, const TorusPoint& start, double time,
                          const numerics::OdeSpec& spec = {1e-12, 0.05, 2'000'000}, int checkpoints = 20) {
    OdeCheck out;
    const auto field = [&](const std::array<double, 3>& x, double) { return reeb_cartesian(form, x[0], x[1]); };
    std::array<double, 3> state{start.r * std::cos(start.disk_angle), start.r * std::sin(start.disk_angle),
                                start.core_angle};
    const double dt = time / checkpoints;
    for (int i = 1; i <= checkpoints; ++i) {
        const auto res = numerics::ode_flow<3>(field, state, dt, spec);
        if (!res.ok) {
            out.ok = false;
            out.failure = res.failure;
            return out;
        }
        state = res.state;
        const auto e = exact_flow(form, start, dt * i);
        const double dx = state[0] - e.r * std::cos(e.disk_angle);
        const double dy = state[1] - e.r * std::sin(e.disk_angle);
        const double ds = state[2] - e.core_angle;
        out.max_deviation = std::max(out.max_deviation, std::sqrt(dx * dx + dy * dy + ds * ds));
        out.radius_drift = std::max(out.radius_drift, std::abs(std::hypot(state[0], state[1]) - start.r));
    }
    return out;
}

}  // namespace systolic::rotorus
