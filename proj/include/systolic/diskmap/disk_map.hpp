#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "systolic/numerics/ode.hpp"
#include "systolic/numerics/radial_function.hpp"
#include "systolic/numerics/vec2.hpp"

namespace systolic::disk {

using numerics::Mat2;
using numerics::RadialFunction;
using numerics::Vec2;

/// z -> R(rho(|z|)) z, the identity for |z| >= support.
struct RadialTwist {
    RadialFunction profile;
    double support = 0.0;
};

/// bump(|z|) * Re((a - i b) z^m) = bump(|z|) * (a Re z^m + b Im z^m).
struct HarmonicTerm {
    RadialFunction bump;
    int m = 0;
    double a = 0.0;
    double b = 0.0;
};

/// Time-t flow of the Hamiltonian vector field X with i_X(dx^dy) = -dH.
struct HamiltonianStep {
    std::vector<HarmonicTerm> terms;
    double time = 0.0;
    int steps_per_unit_time = 64;  // fixed-step integrator resolution

    std::size_t steps() const {
        return static_cast<std::size_t>(std::max(4.0, std::ceil(std::abs(time) * steps_per_unit_time)));
    }

    double support() const {
        double s = 0.0;
        for (const auto& t : terms) s = std::max(s, t.bump.support_radius());
        return s;
    }
};

using Primitive = std::variant<RadialTwist, HamiltonianStep>;

/// Value, gradient and Hessian of a Hamiltonian at a point.
struct HamiltonianJet {
    double h = 0.0;
    double hx = 0.0, hy = 0.0;
    double hxx = 0.0, hxy = 0.0, hyy = 0.0;
};

inline HamiltonianJet hamiltonian_jet(const HamiltonianStep& step, Vec2 p) {
    HamiltonianJet out;
    const double r = numerics::norm(p);
    const std::complex<double> z(p.x, p.y);
    for (const auto& t : step.terms) {
        if (r >= t.bump.support_radius()) continue;
        const auto bj = t.bump.jet(r);
        // bump'(r)/r is smooth at 0 for even bumps.
        const double b1r = r > 1e-8 ? bj.d1 / r : bj.d2;
        const double bx = b1r * p.x, by = b1r * p.y;
        double bxx, bxy, byy;
        if (r > 1e-8) {
            const double r2 = r * r;
            bxx = bj.d2 * p.x * p.x / r2 + b1r * p.y * p.y / r2;
            byy = bj.d2 * p.y * p.y / r2 + b1r * p.x * p.x / r2;
            bxy = (bj.d2 - b1r) * p.x * p.y / r2;
        } else {
            bxx = byy = bj.d2;
            bxy = 0.0;
        }
        const std::complex<double> c(t.a, -t.b);
        const int m = t.m;
        const auto zp = [&](int k) { return k < 0 ? std::complex<double>(0.0) : std::pow(z, k); };
        const double P = m == 0 ? t.a : std::real(c * zp(m));
        const std::complex<double> d1 = m >= 1 ? c * static_cast<double>(m) * zp(m - 1) : 0.0;
        const std::complex<double> d2 = m >= 2 ? c * static_cast<double>(m * (m - 1)) * zp(m - 2) : 0.0;
        const double px = std::real(d1), py = -std::imag(d1);
        const double pxx = std::real(d2), pxy = -std::imag(d2), pyy = -pxx;
        out.h += bj.v * P;
        out.hx += bx * P + bj.v * px;
        out.hy += by * P + bj.v * py;
        out.hxx += bxx * P + 2.0 * bx * px + bj.v * pxx;
        out.hyy += byy * P + 2.0 * by * py + bj.v * pyy;
        out.hxy += bxy * P + bx * py + by * px + bj.v * pxy;
    }
    return out;
}

/// Hamiltonian vector field (-H_y, H_x).
inline Vec2 hamiltonian_field(const HamiltonianStep& step, Vec2 p) {
    const auto j = hamiltonian_jet(step, p);
    return {-j.hy, j.hx};
}

/**
 * Compactly supported area-preserving map of the disk of radius `radius`,
 * given as a composition of primitives. The list [p1, p2, ...] denotes
 * p1 o p2 o ..., so the last primitive acts first.
 */
class DiskMap {
public:
    DiskMap() = default;
    explicit DiskMap(double radius, std::vector<Primitive> primitives = {})
        : radius_(radius), primitives_(std::move(primitives)) {
        if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw std::invalid_argument("DiskMap: radius must be positive");
        for (const auto& p : primitives_) validate(p);
    }

    static DiskMap identity(double radius) { return DiskMap(radius); }

    static DiskMap twist(double radius, RadialFunction profile) {
        const double s = std::min(radius, profile.support_radius());
        return DiskMap(radius, {RadialTwist{std::move(profile), s}});
    }

    double radius() const { return radius_; }
    const std::vector<Primitive>& primitives() const { return primitives_; }
    bool is_identity() const { return primitives_.empty(); }

    /// Radius outside which the map is the identity.
    double support() const {
        double s = 0.0;
        for (const auto& p : primitives_) s = std::max(s, primitive_support(p));
        return s;
    }

    Vec2 operator()(Vec2 z) const {
        check_inside(z);
        for (auto it = primitives_.rbegin(); it != primitives_.rend(); ++it) z = apply(*it, z);
        return z;
    }

    Mat2 differential(Vec2 z) const { return evaluate_with_differential(z).second; }

    std::pair<Vec2, Mat2> evaluate_with_differential(Vec2 z) const {
        check_inside(z);
        Mat2 d = Mat2::identity();
        for (auto it = primitives_.rbegin(); it != primitives_.rend(); ++it) {
            const auto [w, dp] = apply_with_differential(*it, z);
            d = dp * d;
            z = w;
        }
        return {z, d};
    }

    /// this o other.
    DiskMap compose(const DiskMap& other) const {
        if (std::abs(radius_ - other.radius_) > 1e-12 * radius_)
            throw std::invalid_argument("DiskMap::compose: ambient radii differ");
        std::vector<Primitive> p = primitives_;
        p.insert(p.end(), other.primitives_.begin(), other.primitives_.end());
        return DiskMap(radius_, std::move(p));
    }

    /// z -> factor * phi(z / factor), a map of the disk of radius factor * R.
    DiskMap rescaled(double factor) const {
        if (!(factor > 0.0)) throw std::invalid_argument("rescale factor must be positive");
        std::vector<Primitive> out;
        for (const auto& p : primitives_) {
            if (const auto* tw = std::get_if<RadialTwist>(&p)) {
                out.emplace_back(RadialTwist{tw->profile.rescaled(factor), tw->support * factor});
            } else {
                auto h = std::get<HamiltonianStep>(p);
                for (auto& t : h.terms) {
                    const double amp = std::pow(factor, 2 - t.m);
                    t.bump = t.bump.rescaled(factor);
                    t.a *= amp;
                    t.b *= amp;
                }
                out.emplace_back(std::move(h));
            }
        }
        return DiskMap(radius_ * factor, std::move(out));
    }

    /// Radii at which some primitive has a knot, useful as quadrature breakpoints.
    std::vector<double> radial_breaks() const {
        std::vector<double> out;
        for (const auto& p : primitives_) {
            if (const auto* tw = std::get_if<RadialTwist>(&p)) {
                out.insert(out.end(), tw->profile.knots().begin(), tw->profile.knots().end());
                out.push_back(tw->support);
            } else {
                for (const auto& t : std::get<HamiltonianStep>(p).terms)
                    out.insert(out.end(), t.bump.knots().begin(), t.bump.knots().end());
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    static double primitive_support(const Primitive& p) {
        if (const auto* tw = std::get_if<RadialTwist>(&p)) return tw->support;
        const auto& h = std::get<HamiltonianStep>(p);
        return h.time == 0.0 ? 0.0 : h.support();
    }

private:
    void validate(const Primitive& p) const {
        const double tol = 1e-12 * radius_;
        if (const auto* tw = std::get_if<RadialTwist>(&p)) {
            if (!(tw->support >= 0.0) || tw->support > radius_ + tol)
                throw std::invalid_argument("RadialTwist: support must lie in [0, R]");
            if (tw->profile.parity() != numerics::Parity::even)
                throw std::invalid_argument("RadialTwist: profile must be tagged even");
            if (tw->support > 0.0) {
                const auto j = tw->profile.jet(tw->support);
                if (std::abs(j.v) > 1e-12 || std::abs(j.d1) > 1e-10)
                    throw std::invalid_argument("RadialTwist: profile must vanish to first order at the support radius");
            }
        } else {
            const auto& h = std::get<HamiltonianStep>(p);
            if (!std::isfinite(h.time)) throw std::invalid_argument("HamiltonianStep: non-finite time");
            if (h.steps_per_unit_time < 1) throw std::invalid_argument("HamiltonianStep: steps_per_unit_time must be >= 1");
            for (const auto& t : h.terms) {
                if (t.m < 0) throw std::invalid_argument("HamiltonianStep: harmonic order must be >= 0");
                if (t.bump.parity() != numerics::Parity::even)
                    throw std::invalid_argument("HamiltonianStep: bump must be tagged even");
                if (!(t.bump.support_radius() <= radius_ + tol))
                    throw std::invalid_argument("HamiltonianStep: bump support exceeds the disk");
            }
        }
    }

    void check_inside(Vec2 z) const {
        if (!(numerics::norm(z) <= radius_ * (1.0 + 1e-12)))
            throw std::domain_error("DiskMap: point outside the ambient disk");
    }

    static Vec2 apply(const Primitive& p, Vec2 z) {
        if (const auto* tw = std::get_if<RadialTwist>(&p)) {
            const double r = numerics::norm(z);
            if (r >= tw->support) return z;
            return numerics::rotate(z, tw->profile(r));
        }
        const auto& h = std::get<HamiltonianStep>(p);
        if (h.time == 0.0 || numerics::norm(z) >= h.support()) return z;
        const auto s = numerics::ode_flow_fixed<2>(
            [&](const std::array<double, 2>& x, double) {
                const Vec2 v = hamiltonian_field(h, {x[0], x[1]});
                return std::array<double, 2>{v.x, v.y};
            },
            {z.x, z.y}, h.time, h.steps());
        return {s[0], s[1]};
    }

    static std::pair<Vec2, Mat2> apply_with_differential(const Primitive& p, Vec2 z) {
        if (const auto* tw = std::get_if<RadialTwist>(&p)) {
            const double r = numerics::norm(z);
            if (r >= tw->support) return {z, Mat2::identity()};
            const auto j = tw->profile.jet(r);
            const Mat2 rot = numerics::rotation(j.v);
            // D(R(rho) z) = R(rho) (I + (rho'/r) (Jz) z^T)
            const double k = r > 0.0 ? j.d1 / r : 0.0;
            const Mat2 inner{1.0 - k * z.y * z.x, -k * z.y * z.y, k * z.x * z.x, 1.0 + k * z.x * z.y};
            return {rot * z, rot * inner};
        }
        const auto& h = std::get<HamiltonianStep>(p);
        if (h.time == 0.0 || numerics::norm(z) >= h.support()) return {z, Mat2::identity()};
        const auto s = numerics::ode_flow_fixed<6>(
            [&](const std::array<double, 6>& s, double) {
                const auto j = hamiltonian_jet(h, {s[0], s[1]});
                // DX = [[-Hxy, -Hyy], [Hxx, Hxy]] applied to the 2x2 block (s2 s3; s4 s5).
                const double a = -j.hxy, b = -j.hyy, c = j.hxx, d = j.hxy;
                return std::array<double, 6>{-j.hy,
                                             j.hx,
                                             a * s[2] + b * s[4],
                                             a * s[3] + b * s[5],
                                             c * s[2] + d * s[4],
                                             c * s[3] + d * s[5]};
            },
            {z.x, z.y, 1.0, 0.0, 0.0, 1.0}, h.time, h.steps());
        return {{s[0], s[1]}, Mat2{s[2], s[3], s[4], s[5]}};
    }

    double radius_ = 1.0;
    std::vector<Primitive> primitives_;
};

}  // namespace systolic::disk
