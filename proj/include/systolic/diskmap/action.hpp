#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "systolic/diskmap/disk_map.hpp"
#include "systolic/diskmap/one_form.hpp"
#include "systolic/numerics/quadrature.hpp"

namespace systolic::disk {

using numerics::Integral;
using numerics::QuadratureSpec;

inline QuadratureSpec default_action_quadrature() { return {1e-12, 1e-12, 4000}; }

/**
 * The compactly supported function sigma with d sigma = phi^* lambda - lambda.
 *
 * sigma(z) is obtained by integrating the exact 1-form
 * eta_p(v) = lambda_{phi(p)}(D phi_p v) - lambda_p(v) along the radial
 * segment from z out to the support circle, where sigma vanishes.
 */
class ActionField {
public:
    explicit ActionField(DiskMap map, PrimitiveOneForm lambda = {}, QuadratureSpec spec = default_action_quadrature())
        : map_(std::move(map)), lambda_(std::move(lambda)), spec_(spec), breaks_(map_.radial_breaks()) {
        spec_.validate();
    }

    /// Field of phi o psi assembled as sigma_phi o psi + sigma_psi.
    static ActionField composed(const ActionField& phi, const ActionField& psi) {
        if (std::abs(phi.map_.radius() - psi.map_.radius()) > 1e-12 * phi.map_.radius())
            throw std::invalid_argument("compose_action: ambient radii differ");
        ActionField out(phi.map_.compose(psi.map_), phi.lambda_, phi.spec_);
        out.outer_ = std::make_shared<const ActionField>(phi);
        out.inner_ = std::make_shared<const ActionField>(psi);
        return out;
    }

    const DiskMap& map() const { return map_; }
    const PrimitiveOneForm& primitive() const { return lambda_; }
    const QuadratureSpec& quadrature() const { return spec_; }
    bool is_composite() const { return outer_ != nullptr; }

    /// eta_p(v) = lambda_{phi(p)}(D phi_p v) - lambda_p(v).
    double eta(Vec2 p, Vec2 v) const {
        const auto [q, d] = map_.evaluate_with_differential(p);
        return lambda_(q, d * v) - lambda_(p, v);
    }

    double operator()(Vec2 z) const { return evaluate(z).value; }

    Integral evaluate(Vec2 z) const {
        if (outer_) {
            const Integral a = outer_->evaluate(inner_->map_(z));
            const Integral b = inner_->evaluate(z);
            return {a.value + b.value, a.error + b.error, a.converged && b.converged, a.evaluations + b.evaluations};
        }
        const double s = map_.support();
        const double r = numerics::norm(z);
        if (r >= s) return {};
        const Vec2 e = r > 0.0 ? (1.0 / r) * z : Vec2{1.0, 0.0};
        Integral i = numerics::integrate_1d([&](double t) { return eta(t * e, e); }, r, s, spec_, breaks_);
        i.value = -i.value;
        return i;
    }

    /// sigma(z) re-integrated along the horizontal segment from z to the
    /// support circle; agrees with evaluate() up to quadrature error.
    Integral evaluate_second_path(Vec2 z) const {
        const double s = map_.support();
        if (numerics::norm(z) >= s) return {};
        const double xb = std::sqrt(std::max(0.0, s * s - z.y * z.y));
        std::vector<double> brk;
        for (double b : breaks_)
            if (b > std::abs(z.y)) brk.push_back(std::sqrt(b * b - z.y * z.y));
        Integral i = numerics::integrate_1d([&](double t) { return eta({t, z.y}, {1.0, 0.0}); }, z.x, xb, spec_, brk);
        i.value = -i.value;
        return i;
    }

    /// CAL = integral of sigma over the disk, via the exact Fubini swap
    /// CAL = -int_0^{2pi} int_0^S eta_{t e}(e) t^2/2 dt dtheta.
    Integral calabi() const {
        if (outer_) return calabi_direct();
        const double s = map_.support();
        if (s == 0.0) return {};
        return numerics::integrate_polar(
            [&](double t, double th) {
                const Vec2 e{std::cos(th), std::sin(th)};
                return -0.5 * t * t * eta(t * e, e);
            },
            s, spec_, breaks_);
    }

    /// CAL as a disk quadrature of pointwise sigma (one path integral per node).
    /// Each node costs a full path integral, so the outer tolerance is floored at `outer_floor`.
    Integral calabi_direct(double outer_floor = 1e-10) const {
        const double s = map_.support();
        if (s == 0.0) return {};
        QuadratureSpec outer = spec_;
        outer.abs_tol = std::max(spec_.abs_tol, outer_floor);
        outer.rel_tol = std::max(spec_.rel_tol, outer_floor);
        return numerics::integrate_disk([&](Vec2 z) { return (*this)(z); }, s, outer, breaks_);
    }

private:
    DiskMap map_;
    PrimitiveOneForm lambda_;
    QuadratureSpec spec_;
    std::vector<double> breaks_;
    std::shared_ptr<const ActionField> outer_;
    std::shared_ptr<const ActionField> inner_;
};

inline ActionField action(const DiskMap& map, const PrimitiveOneForm& lambda = {},
                          const QuadratureSpec& spec = default_action_quadrature()) {
    return ActionField(map, lambda, spec);
}

inline Integral calabi(const ActionField& af) { return af.calabi(); }

/// sigma_{phi o psi} = sigma_phi o psi + sigma_psi.
inline ActionField compose_action(const DiskMap& phi, const DiskMap& psi, const PrimitiveOneForm& lambda = {},
                                  const QuadratureSpec& spec = default_action_quadrature()) {
    return ActionField::composed(ActionField(phi, lambda, spec), ActionField(psi, lambda, spec));
}

/// Closed form for a pure radial twist with lambda0: sigma(r) = -int_r^S (s^2/2) rho'(s) ds.
inline Integral radial_twist_action(const RadialTwist& tw, double r, const QuadratureSpec& spec = default_action_quadrature()) {
    if (r >= tw.support) return {};
    Integral i = numerics::integrate_1d([&](double s) { return 0.5 * s * s * tw.profile.derivative(s); }, r,
                                        tw.support, spec, tw.profile.knots());
    i.value = -i.value;
    return i;
}

/// The same closed form as an exact piecewise polynomial in r (zero beyond the support).
inline RadialFunction radial_twist_action_function(const RadialTwist& tw) {
    const double top = std::max(tw.profile.r_max(), tw.support);
    const auto half_r2 = RadialFunction::polynomial({0.0, 0.0, 0.5}, top, numerics::Parity::even);
    const auto antider = (half_r2 * tw.profile.derivative_function()).antiderivative();
    return antider + RadialFunction::constant(-antider(tw.support), top);
}

}  // namespace systolic::disk
