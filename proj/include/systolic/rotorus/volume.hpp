#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "systolic/numerics/quadrature.hpp"
#include "systolic/rotorus/return_system.hpp"
#include "systolic/rotorus/rot_form.hpp"

namespace systolic::rotorus {

using numerics::Integral;
using numerics::QuadratureSpec;

/// Contact volume computed three ways; `spread` is the largest pairwise relative difference.
struct VolumeReport {
    Integral radial;     // 2pi P_core int_0^R W dr
    Integral section;    // int over a section of tau dalpha
    Integral cartesian;  // alpha . curl(alpha) over disk x circle
    Section section_used = Section::core_angle;
    double spread = 0.0;

    double value() const { return radial.value; }
    bool converged() const { return radial.converged && section.converged && cartesian.converged; }
};

inline std::vector<double> form_breaks(const RotForm& form) {
    std::vector<double> b = form.c().knots();
    b.insert(b.end(), form.d().knots().begin(), form.d().knots().end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

inline Integral volume_radial(const RotForm& form, const QuadratureSpec& spec = {1e-12, 1e-12, 4000}) {
    const auto breaks = form_breaks(form);
    auto i = numerics::integrate_1d([&](double r) { return form.wronskian(r); }, 0.0, form.radius(), spec, breaks);
    const double scale = RotForm::disk_period * form.core_period();
    i.value *= scale;
    i.error *= scale;
    return i;
}

/**
 * Volume as the integral of the return time against dalpha over a section: the
 * core-angle disk when it is transverse, otherwise the disk-angle annulus.
 */
inline Integral volume_section(const RotForm& form, Section* used = nullptr,
                               const QuadratureSpec& spec = {1e-12, 1e-12, 4000}) {
    const auto breaks = form_breaks(form);
    const double k = form.kappa();
    try {
        const ReturnSystem rs(form, Section::core_angle);
        if (used) *used = Section::core_angle;
        // dalpha on the section is kappa c'(r)/r dx dy
        const double c2 = form.c().jet(0.0).d2;
        return numerics::integrate_disk(
            [&](numerics::Vec2 z) {
                const double r = numerics::norm(z);
                const double density = r > 0.0 ? k * form.c().derivative(r) / r : k * c2;
                return rs.return_time(r) * density;
            },
            form.radius(), spec, breaks);
    } catch (const std::domain_error&) {
    }
    const ReturnSystem rs(form, Section::disk_angle);
    if (used) *used = Section::disk_angle;
    auto i = numerics::integrate_1d(
        [&](double r) { return rs.return_time(r) * k * std::abs(form.d().derivative(r)); }, 0.0, form.radius(), spec,
        breaks);
    i.value *= form.core_period();
    i.error *= form.core_period();
    return i;
}

/// alpha ^ dalpha integrated over the disk and the core circle in Cartesian coordinates.
inline Integral volume_cartesian(const RotForm& form, const QuadratureSpec& spec = {1e-11, 1e-11, 4000}) {
    const auto breaks = form_breaks(form);
    Integral disk_total;
    const double P = form.core_period();
    auto outer = numerics::integrate_periodic(
        [&](double theta) {
            const double s = P * theta / two_pi;
            const auto in = numerics::integrate_disk(
                [&](numerics::Vec2 z) {
                    const auto cf = cartesian_form(form, z.x, z.y, s);
                    return cf.alpha[0] * cf.curl[0] + cf.alpha[1] * cf.curl[1] + cf.alpha[2] * cf.curl[2];
                },
                form.radius(), spec, breaks);
            disk_total.converged = disk_total.converged && in.converged;
            disk_total.error = std::max(disk_total.error, in.error);
            disk_total.evaluations += in.evaluations;
            return in.value;
        },
        spec);
    const double scale = P / two_pi;
    outer.value *= scale;
    outer.error = scale * outer.error + P * disk_total.error;
    outer.converged = outer.converged && disk_total.converged;
    outer.evaluations += disk_total.evaluations;
    return outer;
}

inline VolumeReport volume(const RotForm& form) {
    VolumeReport v;
    v.radial = volume_radial(form);
    v.section = volume_section(form, &v.section_used);
    v.cartesian = volume_cartesian(form);
    const double a = v.radial.value, b = v.section.value, c = v.cartesian.value;
    const auto rel = [](double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); };
    v.spread = std::max({rel(a, b), rel(a, c), rel(b, c)});
    return v;
}

}  // namespace systolic::rotorus
