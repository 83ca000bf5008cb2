#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "systolic/numerics/vec2.hpp"
#include "systolic/rotorus/rot_form.hpp"

namespace systolic::rotorus {

enum class Section {
    disk_angle,  // {phi_disk = const}: annulus in (r, phi_core)
    core_angle,  // {phi_core = const}: disk in (r, phi_disk)
};

inline std::string_view to_string(Section s) { return s == Section::disk_angle ? "disk-angle" : "core-angle"; }

inline Section section_from_string(std::string_view s) {
    if (s == "disk-angle") return Section::disk_angle;
    if (s == "core-angle") return Section::core_angle;
    throw std::invalid_argument("unknown section '" + std::string(s) + "'");
}

/**
 * First return to a section of a rotational form. Both the return time and the
 * shift of the other angle depend on r only, so the return map is a radial twist.
 */
class ReturnSystem {
public:
    ReturnSystem(RotForm form, Section section, double r_inner = 0.0, double r_outer = -1.0, std::size_t grid = 2000)
        : form_(std::move(form)), section_(section), r_inner_(r_inner),
          r_outer_(r_outer < 0.0 ? form_.radius() : r_outer) {
        if (!(r_inner_ >= 0.0 && r_inner_ < r_outer_ && r_outer_ <= form_.radius()))
            throw std::invalid_argument("ReturnSystem: need 0 <= r_inner < r_outer <= R");
        for (std::size_t i = 0; i <= grid; ++i) {
            const double r = r_inner_ + (r_outer_ - r_inner_) * static_cast<double>(i) / static_cast<double>(grid);
            if (!(std::abs(section_velocity(r)) > 0.0) || (section_ == Section::core_angle && !(section_velocity(r) > 0.0)))
                throw std::domain_error("ReturnSystem: " + std::string(to_string(section_)) +
                                        " section is not transverse at r = " + std::to_string(r));
        }
    }

    const RotForm& form() const { return form_; }
    Section section() const { return section_; }
    double r_inner() const { return r_inner_; }
    double r_outer() const { return r_outer_; }

    /// Length of the circle the section angle runs along.
    double fiber_length() const { return section_ == Section::core_angle ? form_.core_period() : RotForm::disk_period; }

    double return_time(double r) const { return fiber_length() / std::abs(section_velocity(r)); }

    /// Advance of the other angle during one return.
    double shift(double r) const {
        const auto v = form_.velocities(r);
        return (section_ == Section::core_angle ? v.disk : v.core) * return_time(r);
    }

    /// The return map in Cartesian coordinates of the section: rotation by shift(r).
    /// For the disk-angle section the angle coordinate is rescaled to period 2pi.
    numerics::Vec2 map(numerics::Vec2 z) const {
        const double r = numerics::norm(z);
        const double angle = section_ == Section::core_angle ? shift(r) : two_pi * shift(r) / form_.core_period();
        return numerics::rotate(z, angle);
    }

    /// Integral of dalpha over the section between two radii (closed form, the section is transverse).
    double area(double r0, double r1) const {
        const double k = form_.kappa();
        if (section_ == Section::core_angle) return RotForm::disk_period * k * std::abs(form_.c()(r1) - form_.c()(r0));
        return form_.core_period() * k * std::abs(form_.d()(r0) - form_.d()(r1));
    }

private:
    double section_velocity(double r) const {
        const auto v = form_.velocities(r);
        return section_ == Section::core_angle ? v.core : v.disk;
    }

    RotForm form_;
    Section section_;
    double r_inner_;
    double r_outer_;
};

}  // namespace systolic::rotorus
