#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "systolic/diskmap/action.hpp"
#include "systolic/rotorus/rot_form.hpp"

namespace systolic::plug {

/**
 * Rotational suspension of the radial twist by `profile` on the disk of radius R:
 * c = r^2/2 and d = (L + sigma - profile r^2/2)/L, with sigma the exact
 * lambda0-action of the twist. The core-angle return of this form has shift
 * profile(r) and time L + sigma(r), and W L = r (L + sigma). Where the profile
 * vanishes the form is lambda0 + ds.
 */
inline rotorus::RotForm realize_rotational(const numerics::RadialFunction& profile, double L, double R) {
    if (!(L > 0.0) || !(R > 0.0)) throw std::invalid_argument("realize_rotational: need L > 0 and R > 0");
    const disk::RadialTwist tw{profile, std::min(R, profile.support_radius())};
    const double top = std::max(R, profile.r_max());
    const auto sigma = disk::radial_twist_action_function(tw);
    for (std::size_t i = 0; i <= 4000; ++i) {
        const double r = R * static_cast<double>(i) / 4000.0;
        if (!(L + sigma(r) > 0.0))
            throw std::domain_error("realize_rotational: return time " + std::to_string(L + sigma(r)) +
                                    " <= 0 at r = " + std::to_string(r));
    }
    const auto half_r2 = numerics::RadialFunction::polynomial({0.0, 0.0, 0.5}, top, numerics::Parity::even);
    const auto d = (numerics::RadialFunction::constant(L, top) + sigma + (half_r2 * profile).scaled(-1.0)).scaled(1.0 / L);
    return rotorus::RotForm(R, L, 1.0, half_r2, d);
}

}  // namespace systolic::plug
