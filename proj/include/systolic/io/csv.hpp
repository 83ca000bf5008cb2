#pragma once

#include <charconv>
#include <cmath>
#include <string>

#include "systolic/rotorus/orbits.hpp"

namespace systolic::io {

/// Shortest round-trip decimal; same bytes on every run and platform with a conforming to_chars.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

/// One row per orbit: kind,r,p,q,T. Bands report their inner radius.
inline std::string orbits_csv(const rotorus::OrbitEnumeration& e) {
    std::string out = "kind,r,p,q,T\n";
    for (const auto& o : e.orbits) {
        out += std::string(rotorus::to_string(o.kind)) + ',' + format_number(o.r) + ',' + std::to_string(o.p) + ',' +
               std::to_string(o.q) + ',' + format_number(o.period) + '\n';
    }
    return out;
}

}  // namespace systolic::io
