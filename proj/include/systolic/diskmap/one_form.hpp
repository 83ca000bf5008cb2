#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "systolic/numerics/radial_function.hpp"
#include "systolic/numerics/vec2.hpp"

namespace systolic::disk {

/// coef * x^i * y^j
struct Monomial {
    int i = 0;
    int j = 0;
    double coef = 0.0;
};

/**
 * A primitive of dx^dy of the form lambda0 + du, where
 * lambda0 = (x dy - y dx)/2 and u = envelope(|z|) * sum of monomials
 * (u = 0 gives lambda0 itself).
 */
class PrimitiveOneForm {
public:
    PrimitiveOneForm() = default;
    PrimitiveOneForm(std::vector<Monomial> terms, std::optional<numerics::RadialFunction> envelope = std::nullopt)
        : terms_(std::move(terms)), envelope_(std::move(envelope)) {
        for (const auto& t : terms_)
            if (t.i < 0 || t.j < 0) throw std::invalid_argument("PrimitiveOneForm: negative exponent");
        if (envelope_ && envelope_->parity() != numerics::Parity::even)
            throw std::invalid_argument("PrimitiveOneForm: envelope must be tagged even");
    }

    static PrimitiveOneForm standard() { return {}; }

    bool is_standard() const { return terms_.empty(); }
    const std::vector<Monomial>& terms() const { return terms_; }
    const std::optional<numerics::RadialFunction>& envelope() const { return envelope_; }

    double u(numerics::Vec2 p) const {
        if (terms_.empty()) return 0.0;
        return envelope_value(p) * poly(p);
    }

    numerics::Vec2 grad_u(numerics::Vec2 p) const {
        if (terms_.empty()) return {};
        double px = 0.0, py = 0.0;
        for (const auto& t : terms_) {
            if (t.i > 0) px += t.coef * t.i * std::pow(p.x, t.i - 1) * std::pow(p.y, t.j);
            if (t.j > 0) py += t.coef * t.j * std::pow(p.x, t.i) * std::pow(p.y, t.j - 1);
        }
        if (!envelope_) return {px, py};
        const double r = numerics::norm(p);
        const auto e = envelope_->jet(r);
        const double e1r = r > 1e-12 ? e.d1 / r : e.d2;
        const double q = poly(p);
        return {e.v * px + e1r * p.x * q, e.v * py + e1r * p.y * q};
    }

    /// lambda_p(v)
    double operator()(numerics::Vec2 p, numerics::Vec2 v) const {
        return 0.5 * numerics::cross(p, v) + numerics::dot(grad_u(p), v);
    }

private:
    double poly(numerics::Vec2 p) const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.coef * std::pow(p.x, t.i) * std::pow(p.y, t.j);
        return s;
    }
    double envelope_value(numerics::Vec2 p) const { return envelope_ ? (*envelope_)(numerics::norm(p)) : 1.0; }

    std::vector<Monomial> terms_;
    std::optional<numerics::RadialFunction> envelope_;
};

}  // namespace systolic::disk
