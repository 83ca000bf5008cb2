#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/numerics/quadrature.hpp"
#include "systolic/numerics/radial_function.hpp"
#include "systolic/rotorus/rot_form.hpp"

namespace systolic::profile {

using numerics::Jet;
using numerics::Parity;
using numerics::pi;
using numerics::RadialFunction;
using numerics::two_pi;

struct ProfileParams {
    double s = 0.01;      // height scale of the outer arc 1 + i s (1 - r^2)
    double delta = 0.1;   // the line x + y = 1 + delta carries the inner arc
    double rho = 0.5;     // outer radius
    double r0 = 0.1;      // end of the inner (line) part
    double r1 = 0.3;      // start of the outer arc

    void validate() const {
        if (!(s > 0.0) || !(delta > 0.0)) throw std::invalid_argument("profile: need s > 0 and delta > 0");
        if (!(0.0 < r0 && r0 < r1 && r1 < rho && rho <= 1.0))
            throw std::invalid_argument("profile: need 0 < r0 < r1 < rho <= 1");
    }
};

/// gamma(r) = f(r) + i g(r) on [0, rho].
struct ProfileCurve {
    RadialFunction f;
    RadialFunction g;
    ProfileParams params;
};

struct ConditionResult {
    std::string name;
    bool pass = true;
    double margin = 0.0;  // positive when the condition holds with room to spare
    double witness_r = 0.0;
    std::string detail;
};

struct ProfileReport {
    std::vector<ConditionResult> conditions;
    double gap = 0.0;  // g(r0) - g(rho), compared against 2 delta
    std::size_t grid = 0;

    bool all_pass() const {
        return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
    }
    const ConditionResult* first_failure() const {
        for (const auto& c : conditions)
            if (!c.pass) return &c;
        return nullptr;
    }
    const ConditionResult& get(const std::string& name) const {
        for (const auto& c : conditions)
            if (c.name == name) return c;
        throw std::out_of_range("no condition " + name);
    }
};

/// Uniform grid on [0, rho] merged with the knots of f and g.
inline std::vector<double> profile_grid(const ProfileCurve& c, std::size_t n) {
    const double rho = c.params.rho;
    std::vector<double> rs;
    rs.reserve(n + 1 + c.f.knots().size() + c.g.knots().size());
    for (std::size_t i = 0; i <= n; ++i) rs.push_back(rho * static_cast<double>(i) / static_cast<double>(n));
    for (double k : c.f.knots()) if (k >= 0.0 && k <= rho) rs.push_back(k);
    for (double k : c.g.knots()) if (k >= 0.0 && k <= rho) rs.push_back(k);
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    return rs;
}

/**
 * Checks B1-B5 on a grid. B1: gamma = 1 + i s(1 - r^2) on [r1, rho]. B2: g' < 0
 * on (0, rho]. B3: gamma on the line x + y = 1 + delta over [0, r0], equal to
 * r^2 + i(1 + delta - r^2) near the axis (taken as r <= r0/2), and
 * g(r0) - g(rho) <= 2 delta. B4: the argument of gamma strictly decreases.
 * B5: the argument of gamma' does not increase (tolerance 1e-12).
 */
inline ProfileReport verify_profile(const ProfileCurve& c, std::size_t grid = 10'000) {
    const auto& p = c.params;
    p.validate();
    ProfileReport rep;
    rep.grid = grid;
    const auto rs = profile_grid(c, grid);
    const double exact_tol = 1e-12;

    ConditionResult b1{"B1", true, 0.0, 0.0, "gamma = 1 + i s(1 - r^2) on [r1, rho]"};
    ConditionResult b2{"B2", true, std::numeric_limits<double>::infinity(), 0.0, "g' < 0 on (0, rho]"};
    ConditionResult b3{"B3", true, 0.0, 0.0, "inner arc on x + y = 1 + delta and g(r0) - g(rho) <= 2 delta"};
    ConditionResult b4{"B4", true, std::numeric_limits<double>::infinity(), 0.0, "arg gamma strictly decreasing"};
    ConditionResult b5{"B5", true, std::numeric_limits<double>::infinity(), 0.0, "arg gamma' non-increasing"};
    ConditionResult pos{"positivity", true, std::numeric_limits<double>::infinity(), 0.0, "f >= 0 and g >= 0"};

    // Margins are slack against the pass threshold, so pass iff margin > 0. A failing
    // condition reports its first violation; a passing one its tightest point.
    std::optional<double> first[6];
    const auto track = [&](ConditionResult& cr, std::optional<double>& first_bad, double margin, bool bad, double r) {
        if (margin < cr.margin) {
            cr.margin = margin;
            if (!first_bad) cr.witness_r = r;
        }
        if (bad && !first_bad) {
            first_bad = r;
            cr.witness_r = r;
        }
    };
    b1.margin = b3.margin = std::numeric_limits<double>::infinity();
    for (double r : rs) {
        const Jet f = c.f.jet(r), g = c.g.jet(r);
        if (r >= p.r1) {
            const double dev = std::max(std::abs(f.v - 1.0), std::abs(g.v - p.s * (1.0 - r * r)));
            track(b1, first[0], exact_tol - dev, dev > exact_tol, r);
        }
        if (r <= p.r0) {
            double dev = std::abs(f.v + g.v - (1.0 + p.delta));
            if (r <= 0.5 * p.r0) dev = std::max({dev, std::abs(f.v - r * r), std::abs(g.v - (1.0 + p.delta - r * r))});
            track(b3, first[2], exact_tol - dev, dev > exact_tol, r);
        }
        const double m_pos = std::min(f.v, g.v);
        track(pos, first[5], m_pos + exact_tol, m_pos < -exact_tol, r);
        if (r > 0.0) {
            track(b2, first[1], -g.d1, !(g.d1 < 0.0), r);
            const double arg_rate = (g.d1 * f.v - f.d1 * g.v) / (f.v * f.v + g.v * g.v);
            track(b4, first[3], -arg_rate, !(arg_rate < 0.0), r);
        }
        const double speed2 = f.d1 * f.d1 + g.d1 * g.d1;
        if (speed2 > 0.0) {
            const double turn = (g.d2 * f.d1 - f.d2 * g.d1) / speed2;
            track(b5, first[4], exact_tol - turn, turn > exact_tol, r);
        }
    }
    b1.pass = !first[0];
    rep.gap = c.g(p.r0) - c.g(p.rho);
    b3.margin = std::min(b3.margin, 2.0 * p.delta - rep.gap);
    b3.pass = !first[2] && rep.gap <= 2.0 * p.delta;
    if (!first[2] && !(rep.gap <= 2.0 * p.delta)) b3.witness_r = p.r0;
    b2.pass = !first[1];
    b4.pass = !first[3];
    b5.pass = !first[4];
    pos.pass = !first[5];
    rep.conditions = {b1, b2, b3, b4, b5, pos};
    return rep;
}

namespace detail {

/// Coefficients of the polynomial product.
inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// Coefficients of outer(inner(u)).
inline std::vector<double> poly_compose(const std::vector<double>& outer, const std::vector<double>& inner) {
    std::vector<double> out{outer.back()};
    for (std::size_t k = outer.size() - 1; k-- > 0;) {
        out = poly_mul(out, inner);
        out[0] += outer[k];
    }
    return out;
}

/// The single quintic Hermite piece on [a, b] in the local coordinate.
inline std::vector<double> quintic_piece(double a, double b, Jet left, Jet right) {
    return RadialFunction({a, b}, {left.v, right.v}, {left.d1, right.d1}, std::vector<double>{left.d2, right.d2})
        .pieces()
        .front();
}

/**
 * One design for slope A = f'(r0) and curvature A2 = f''(r0), or nothing when g
 * fails to decrease. On the bridge f = F(g) with, for t = (g - y1)/H,
 * F = 1 - H (t^4 - 3t^5/5): F' runs from 0 at the outer arc to -1 on the line,
 * and F'' = -12 t^2 (1 - t)/H <= 0 vanishes at both ends, so gamma is C2 and
 * turns clockwise by construction.
 */
inline std::optional<ProfileCurve> build(const ProfileParams& p, double g0, double A, double A2, std::size_t pieces) {
    const double rn = 0.5 * p.r0;
    const double f0 = 1.0 + p.delta - g0;
    const double y1 = p.s * (1.0 - p.r1 * p.r1);
    const double H = g0 - y1;

    std::vector<double> k{0.0, rn, p.r0};
    std::vector<std::vector<double>> fp, gp;
    fp.push_back({0.0, 0.0, rn * rn});
    gp.push_back({1.0 + p.delta, 0.0, -rn * rn});
    auto line = quintic_piece(rn, p.r0, {rn * rn, 2.0 * rn, 2.0}, {f0, A, A2});
    auto neg = line;
    for (auto& c : neg) c = -c;
    neg[0] = 1.0 + p.delta - line[0];
    fp.push_back(line);
    gp.push_back(neg);

    const auto g_bridge = quintic_piece(p.r0, p.r1, {g0, -A, -A2}, {y1, -2.0 * p.s * p.r1, -2.0 * p.s});
    const std::vector<double> F{1.0, 0.0, 0.0, 0.0, -H, 0.6 * H};
    for (std::size_t j = 0; j < pieces; ++j) {
        const double u0 = static_cast<double>(j) / static_cast<double>(pieces);
        const double du = 1.0 / static_cast<double>(pieces);
        k.push_back(p.r0 + (p.r1 - p.r0) * static_cast<double>(j + 1) / static_cast<double>(pieces));
        auto g_local = numerics::detail::reexpand(g_bridge, u0, du);
        // Compose piece by piece around the local start value of t; a global composition cancels badly.
        auto dt = g_local;
        dt[0] -= y1;
        for (auto& c : dt) c /= H;
        const double t0 = dt[0];
        dt[0] = 0.0;
        fp.push_back(poly_compose(numerics::detail::reexpand(F, t0, 1.0), dt));
        gp.push_back(std::move(g_local));
    }
    k.back() = p.r1;
    k.push_back(p.rho);
    fp.push_back({1.0});
    gp.push_back(numerics::detail::reexpand({p.s, 0.0, -p.s}, p.r1, p.rho - p.r1));

    ProfileCurve c{RadialFunction::from_pieces(k, fp, Parity::even), RadialFunction::from_pieces(k, gp, Parity::even), p};
    // g must decrease on the line part and the bridge
    for (int i = 1; i <= 400; ++i) {
        const double r = rn + (p.r1 - rn) * i / 400.0;
        if (!(c.g.derivative(r) < 0.0)) return std::nullopt;
    }
    return c;
}

}  // namespace detail

/**
 * Builds gamma from exact polynomial pieces: the arc r^2 + i(1 + delta - r^2) on
 * [0, r0/2], a monotone quintic along the same line up to r0, a convex C2 bridge
 * to 1 + i s(1 - r1^2) whose tangent turns from -45 to -90 degrees, then the arc
 * 1 + i s(1 - r^2). The bridge shape fixes the line's end height at
 * g(r0) = delta + m with m = 2(delta - s(1 - r1^2))/3, so g(r0) - g(rho) < 5 delta/3.
 * The slope and curvature at r0 are searched; the passing design with the
 * largest B4 margin on [r0/2, r1] wins.
 */
inline ProfileCurve design_profile(const ProfileParams& p, std::size_t bridge_pieces = 64) {
    p.validate();
    const double y1 = p.s * (1.0 - p.r1 * p.r1);
    if (!(y1 < p.delta))
        throw std::domain_error("profile infeasible: the outer arc starts at height s(1 - r1^2) = " +
                                std::to_string(y1) + ", not below delta = " + std::to_string(p.delta));
    const double rn = 0.5 * p.r0;
    const double m = 2.0 * (p.delta - y1) / 3.0;
    if (!(1.0 - m > rn * rn))
        throw std::domain_error("profile infeasible: the line part cannot reach f(r0) = 1 - m above r0^2/4");
    const double g0 = p.delta + m;
    const double a_ref = (g0 - y1) / (p.r1 - p.r0);

    std::optional<ProfileCurve> best;
    double best_score = -std::numeric_limits<double>::infinity();
    std::string first_failure = "g fails to decrease for every candidate slope";
    for (double fa : {0.25, 0.5, 0.75, 1.0, 1.5}) {
        for (double fa2 : {0.0, -0.5, 0.5, -1.0, 1.0}) {
            const double A = fa * a_ref, A2 = fa2 * a_ref / (p.r1 - p.r0);
            auto c = detail::build(p, g0, A, A2, bridge_pieces);
            if (!c) continue;
            const auto rep = verify_profile(*c);
            if (!rep.all_pass()) {
                first_failure = rep.first_failure()->name + " at r = " + std::to_string(rep.first_failure()->witness_r);
                continue;
            }
            double score = std::numeric_limits<double>::infinity();
            for (double r : profile_grid(*c, 2000)) {
                if (r < rn || r > p.r1) continue;
                const Jet f = c->f.jet(r), g = c->g.jet(r);
                score = std::min(score, -(g.d1 * f.v - f.d1 * g.v) / (f.v * f.v + g.v * g.v));
            }
            if (score > best_score) {
                best_score = score;
                best = std::move(c);
            }
        }
    }
    if (!best) throw std::domain_error("profile infeasible: " + first_failure);
    return *best;
}

/// Return time on the page, tau = (g'f - f'g)/((1 + delta) g'), and its r-derivative.
class TauProfile {
public:
    explicit TauProfile(ProfileCurve c) : c_(std::move(c)) {}

    double operator()(double r) const {
        const Jet f = c_.f.jet(r), g = c_.g.jet(r);
        if (g.d1 == 0.0) {
            if (r == 0.0) return (f.d2 * g.v - g.d2 * f.v) / ((1.0 + c_.params.delta) * -g.d2);  // limit on the axis
            throw std::domain_error("tau: g' vanishes at r = " + std::to_string(r));
        }
        return (g.d1 * f.v - f.d1 * g.v) / ((1.0 + c_.params.delta) * g.d1);
    }

    /// g (f'g'' - g'f'') / ((1 + delta) g'^2), zero on the axis where gamma is a straight line.
    double derivative(double r) const {
        const Jet f = c_.f.jet(r), g = c_.g.jet(r);
        if (g.d1 == 0.0) return 0.0;
        return g.v * (f.d1 * g.d2 - g.d1 * f.d2) / ((1.0 + c_.params.delta) * g.d1 * g.d1);
    }

    const ProfileCurve& curve() const { return c_; }

private:
    ProfileCurve c_;
};

struct TauReport {
    double tau_min = std::numeric_limits<double>::infinity();
    double tau_max = -std::numeric_limits<double>::infinity();
    double max_slope = -std::numeric_limits<double>::infinity();  // sup of dtau/dr
    double sup_deviation = 0.0;                                   // sup |tau - 1|
    double bound = 0.0;                                           // delta / (1 + delta)
    bool monotone = true;                                         // dtau/dr <= 1e-10
    bool within_bounds = true;                                    // 1/(1+delta) <= tau <= 1 up to 1e-10
};

inline TauReport tau_report(const TauProfile& tau, std::size_t grid = 10'000) {
    const auto& p = tau.curve().params;
    TauReport rep;
    rep.bound = p.delta / (1.0 + p.delta);
    for (double r : profile_grid(tau.curve(), grid)) {
        const double t = tau(r), dt = tau.derivative(r);
        rep.tau_min = std::min(rep.tau_min, t);
        rep.tau_max = std::max(rep.tau_max, t);
        rep.max_slope = std::max(rep.max_slope, dt);
        rep.sup_deviation = std::max(rep.sup_deviation, std::abs(t - 1.0));
    }
    rep.monotone = rep.max_slope <= 1e-10;
    rep.within_bounds = rep.tau_min >= 1.0 / (1.0 + p.delta) - 1e-10 && rep.tau_max <= 1.0 + 1e-10;
    return rep;
}

/// (f dx + g dtheta) / (2 pi (1 + delta)) with x the disk angle and theta the core angle.
inline rotorus::RotForm to_rotform(const ProfileCurve& c) {
    return rotorus::RotForm(c.params.rho, two_pi, 1.0 / (two_pi * (1.0 + c.params.delta)), c.f, c.g);
}

}  // namespace systolic::profile
