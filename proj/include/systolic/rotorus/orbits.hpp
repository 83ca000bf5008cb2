#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "systolic/numerics/roots.hpp"
#include "systolic/rotorus/rot_form.hpp"

namespace systolic::rotorus {

enum class OrbitKind {
    core,
    resonant_torus,  // isolated radius foliated by closed orbits
    resonant_band,   // an interval of radii on which the resonance holds identically
};

inline std::string_view to_string(OrbitKind k) {
    switch (k) {
        case OrbitKind::core: return "core";
        case OrbitKind::resonant_torus: return "resonant-torus";
        case OrbitKind::resonant_band: return "resonant-band";
    }
    return "?";
}

/// p full turns of the disk angle and q of the core angle close up after `period`.
struct OrbitRecord {
    OrbitKind kind = OrbitKind::core;
    double r = 0.0;
    double r_end = 0.0;  // equals r except for bands
    long p = 0;
    long q = 1;
    double period = 0.0;  // minimum over the band for bands
    double closure_error = 0.0;
};

struct OrbitScan {
    double t_max = 10.0;
    int q_max = 4;
    std::size_t grid = 10'000;
};

struct OrbitEnumeration {
    OrbitScan scan;
    std::vector<OrbitRecord> orbits;
    std::vector<std::string> warnings;
};

namespace detail {

struct Turns {
    double u;  // disk turns per unit time
    double v;  // core turns per unit time
};

inline Turns turns(const RotForm& form, double r) {
    const auto w = form.velocities(r);
    return {w.disk / RotForm::disk_period, w.core / form.core_period()};
}

inline double closure_error(const RotForm& form, double r, double t, long p, long q) {
    const auto e = exact_flow(form, {r, 0.0, 0.0}, t);
    return std::max(std::abs(e.disk_angle - RotForm::disk_period * static_cast<double>(p)),
                    std::abs(e.core_angle - form.core_period() * static_cast<double>(q)));
}

}  // namespace detail

/**
 * Closed Reeb orbits of period <= t_max: the core circle and the tori where the
 * frequency vector is a multiple of a primitive integer vector (p, q) with
 * 0 <= q <= q_max. Resonances are bracketed by sign changes of u q - v p on a
 * uniform grid and refined by TOMS 748; runs of grid points where the resonance
 * holds to roundoff are reported as bands. Every record is re-checked by
 * closing the exact flow.
 */
inline OrbitEnumeration orbit_enumerate(const RotForm& form, const OrbitScan& scan) {
    if (!(scan.t_max > 0.0) || scan.q_max < 0 || scan.grid < 2)
        throw std::invalid_argument("orbit_enumerate: need t_max > 0, q_max >= 0, grid >= 2");
    OrbitEnumeration out;
    out.scan = scan;
    const double R = form.radius();
    const double closure_tol = 1e-8;

    const double core_period = form.core_orbit_period();
    if (core_period <= scan.t_max) out.orbits.push_back({OrbitKind::core, 0.0, 0.0, 0, 1, core_period, 0.0});

    const std::size_t n = scan.grid;
    std::vector<double> rs(n);
    std::vector<detail::Turns> tv(n);
    for (std::size_t i = 0; i < n; ++i) {
        rs[i] = R * static_cast<double>(i + 1) / static_cast<double>(n);
        tv[i] = detail::turns(form, rs[i]);
    }

    const auto add = [&](OrbitRecord rec) {
        const auto t = detail::turns(form, rec.r);
        rec.p = std::lround(t.u * rec.period);
        rec.q = std::lround(t.v * rec.period);
        rec.closure_error = detail::closure_error(form, rec.r, rec.period, rec.p, rec.q);
        if (rec.closure_error >= closure_tol * std::max(1.0, rec.period)) {
            out.warnings.push_back("closure check failed at r = " + std::to_string(rec.r) + " for (p, q) = (" +
                                   std::to_string(rec.p) + ", " + std::to_string(rec.q) + ")");
            return;
        }
        out.orbits.push_back(rec);
    };

    for (int q = 0; q <= scan.q_max; ++q) {
        // Candidate p: q = 0 means closed disk circles (p = 1 up to sign); otherwise the
        // range of q u / v over radii where the period q / |v| can be within t_max.
        long p_lo = 1, p_hi = 1;
        if (q > 0) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i = 0; i < n; ++i) {
                const bool near = std::abs(tv[i].v) * scan.t_max >= q ||
                                  (i > 0 && std::abs(tv[i - 1].v) * scan.t_max >= q) ||
                                  (i + 1 < n && std::abs(tv[i + 1].v) * scan.t_max >= q);
                if (!near || tv[i].v == 0.0) continue;
                lo = std::min(lo, q * tv[i].u / tv[i].v);
                hi = std::max(hi, q * tv[i].u / tv[i].v);
            }
            if (!(lo <= hi)) continue;
            p_lo = static_cast<long>(std::floor(lo));
            p_hi = static_cast<long>(std::ceil(hi));
        }
        for (long p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(std::abs(p), static_cast<long>(q)) != 1) continue;
            const auto h = [&](const detail::Turns& t) { return t.u * q - t.v * static_cast<double>(p); };
            const auto scale = [&](const detail::Turns& t) {
                return std::abs(t.u) * q + std::abs(t.v) * static_cast<double>(std::abs(p));
            };
            const auto period_of = [&](const detail::Turns& t) {
                return q > 0 ? q / std::abs(t.v) : 1.0 / std::abs(t.u);
            };
            const auto is_zero = [&](std::size_t i) { return std::abs(h(tv[i])) <= 1e-11 * scale(tv[i]); };

            std::size_t i = 0;
            while (i < n) {
                if (is_zero(i)) {
                    std::size_t j = i;
                    double tmin = period_of(tv[i]);
                    while (j + 1 < n && is_zero(j + 1)) tmin = std::min(tmin, period_of(tv[++j]));
                    if (tmin <= scan.t_max) {
                        if (j > i) {
                            OrbitRecord rec{OrbitKind::resonant_band, rs[i], rs[j], 0, 0, tmin, 0.0};
                            // closure is checked where the band period is attained
                            double best = rs[i];
                            for (std::size_t k = i; k <= j; ++k)
                                if (period_of(tv[k]) == tmin) { best = rs[k]; break; }
                            const auto t = detail::turns(form, best);
                            rec.p = std::lround(t.u * tmin);
                            rec.q = std::lround(t.v * tmin);
                            rec.closure_error = detail::closure_error(form, best, tmin, rec.p, rec.q);
                            if (rec.closure_error < closure_tol * std::max(1.0, tmin))
                                out.orbits.push_back(rec);
                            else
                                out.warnings.push_back("band closure check failed near r = " + std::to_string(best));
                        } else {
                            add({OrbitKind::resonant_torus, rs[i], rs[i], 0, 0, tmin, 0.0});
                        }
                    }
                    i = j + 1;
                    continue;
                }
                if (i + 1 < n && !is_zero(i + 1) && (h(tv[i]) > 0.0) != (h(tv[i + 1]) > 0.0)) {
                    const auto f = [&](double r) { return h(detail::turns(form, r)); };
                    const auto root = numerics::find_root_bracketed(f, rs[i], rs[i + 1]);
                    if (!root.converged) {
                        out.warnings.push_back("resonance (" + std::to_string(p) + ", " + std::to_string(q) +
                                               ") not isolated in [" + std::to_string(rs[i]) + ", " +
                                               std::to_string(rs[i + 1]) + "]: " + root.failure);
                    } else {
                        const double t = period_of(detail::turns(form, root.x));
                        if (t <= scan.t_max) add({OrbitKind::resonant_torus, root.x, root.x, 0, 0, t, 0.0});
                    }
                }
                ++i;
            }
        }
    }

    std::stable_sort(out.orbits.begin(), out.orbits.end(), [](const auto& a, const auto& b) {
        if (a.period != b.period) return a.period < b.period;
        return a.r < b.r;
    });
    return out;
}

struct TminEstimate {
    double value = std::numeric_limits<double>::infinity();
    bool heuristic = true;  // bounded search: q <= q_max on a finite grid
    OrbitScan scan;
    std::size_t orbits = 0;
};

inline TminEstimate tmin(const RotForm& form, const OrbitScan& scan) {
    const auto e = orbit_enumerate(form, scan);
    TminEstimate out;
    out.scan = scan;
    out.orbits = e.orbits.size();
    for (const auto& o : e.orbits) out.value = std::min(out.value, o.period);
    return out;
}

}  // namespace systolic::rotorus
