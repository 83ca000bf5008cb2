#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "systolic/numerics/dual.hpp"

namespace systolic::numerics {

/// Behaviour of a radial coefficient under r -> -r. Governs the smooth
/// extension of the function through the axis r = 0.
enum class Parity { even, odd, none };

inline std::string_view to_string(Parity p) {
    switch (p) {
        case Parity::even: return "even";
        case Parity::odd: return "odd";
        case Parity::none: return "none";
    }
    return "none";
}

inline Parity parity_from_string(std::string_view s) {
    if (s == "even") return Parity::even;
    if (s == "odd") return Parity::odd;
    if (s == "none") return Parity::none;
    throw std::invalid_argument("unknown parity tag: " + std::string(s));
}

/// Value and first two derivatives at a point.
struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

namespace detail {

/// Coefficients of q(s) = p(alpha + beta s) for p given by monomial coefficients.
inline std::vector<double> reexpand(std::vector<double> c, double alpha, double beta) {
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j > i; --j) c[j - 1] += alpha * c[j];
    double b = 1.0;
    for (auto& x : c) {
        x *= b;
        b *= beta;
    }
    return c;
}

/// p, p', p'' at t by Horner's scheme.
inline Jet horner(const std::vector<double>& c, double t) {
    double p0 = c.back(), p1 = 0.0, p2 = 0.0;
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        p2 = p2 * t + p1;
        p1 = p1 * t + p0;
        p0 = p0 * t + c[k];
    }
    return {p0, p1, 2.0 * p2};
}

}  // namespace detail

/**
 * Piecewise polynomial function of the radius.
 *
 * Usually built from Hermite data: at strictly increasing knots the value
 * and first derivative (cubic pieces, C1) and optionally the second
 * derivative (quintic pieces, C2). Pieces may also be given directly as
 * polynomials of any degree, which keeps closed-form profiles exact. Outside
 * the knot range the function continues by its second-order Taylor
 * polynomial at the end knot, except that for r < 0 an even/odd parity tag
 * reflects through the axis.
 *
 * Each piece is stored in monomial form in the local coordinate t in [0, 1].
 */
class RadialFunction {
public:
    RadialFunction() : RadialFunction(std::vector<double>{0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, std::nullopt, Parity::even) {}

    RadialFunction(std::vector<double> knots, std::vector<double> values, std::vector<double> d1,
                   std::optional<std::vector<double>> d2 = std::nullopt, Parity parity = Parity::none)
        : knots_(std::move(knots)), values_(std::move(values)), d1_(std::move(d1)),
          d2_(std::move(d2)), parity_(parity) {
        validate_knots();
        const std::size_t n = knots_.size();
        if (values_.size() != n || d1_.size() != n || (d2_ && d2_->size() != n))
            throw std::invalid_argument("RadialFunction: knot data length mismatch");
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isfinite(values_[i]) || !std::isfinite(d1_[i]) || (d2_ && !std::isfinite((*d2_)[i])))
                throw std::invalid_argument("RadialFunction: non-finite knot data");
        build_hermite_pieces();
        validate_axis();
    }

    /// Pieces given as local monomial coefficients (t = (r - k_i)/(k_{i+1} - k_i)).
    static RadialFunction from_pieces(std::vector<double> knots, std::vector<std::vector<double>> pieces,
                                      Parity parity = Parity::none) {
        RadialFunction f;
        f.knots_ = std::move(knots);
        f.pieces_ = std::move(pieces);
        f.parity_ = parity;
        f.hermite_ = false;
        f.validate_knots();
        if (f.pieces_.size() + 1 != f.knots_.size())
            throw std::invalid_argument("RadialFunction: need one piece per knot interval");
        for (const auto& p : f.pieces_) {
            if (p.empty()) throw std::invalid_argument("RadialFunction: empty piece");
            for (double c : p)
                if (!std::isfinite(c)) throw std::invalid_argument("RadialFunction: non-finite coefficient");
        }
        const std::size_t n = f.knots_.size();
        f.values_.resize(n);
        f.d1_.resize(n);
        f.d2_.emplace(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t p = i + 1 < n ? i : i - 1;
            Jet j = f.piece(p, f.knots_[i]);
            // Cancellation in a flat end (e.g. (1 - t^2)^k at t = 1) leaves roundoff; snap it to zero.
            const double h = f.knots_[p + 1] - f.knots_[p];
            double mass = 0.0;
            for (std::size_t k = 0; k < f.pieces_[p].size(); ++k) mass += std::abs(f.pieces_[p][k]) * (k + 1) * (k + 1);
            const double eps = 64.0 * std::numeric_limits<double>::epsilon() * mass;
            if (std::abs(j.v) <= eps) j.v = 0.0;
            if (std::abs(j.d1) <= eps / h) j.d1 = 0.0;
            if (std::abs(j.d2) <= eps / (h * h)) j.d2 = 0.0;
            f.values_[i] = j.v;
            f.d1_[i] = j.d1;
            (*f.d2_)[i] = j.d2;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const Jet l = f.piece(i - 1, f.knots_[i]);
            const double scale = 1.0 + std::abs(l.v) + std::abs(l.d1);
            if (std::abs(l.v - f.values_[i]) > 1e-12 * scale || std::abs(l.d1 - f.d1_[i]) > 1e-10 * scale)
                throw std::invalid_argument("RadialFunction: pieces are not C1 at a knot");
        }
        f.validate_axis();
        return f;
    }

    /// Quintic Hermite sample of a function given with its first two derivatives.
    static RadialFunction sample(const std::function<Jet(double)>& f, std::span<const double> knots,
                                 Parity parity = Parity::none) {
        std::vector<double> k(knots.begin(), knots.end()), v, d1, d2;
        v.reserve(k.size());
        d1.reserve(k.size());
        d2.reserve(k.size());
        for (double r : k) {
            const Jet j = f(r);
            v.push_back(j.v);
            d1.push_back(j.d1);
            d2.push_back(j.d2);
        }
        return RadialFunction(std::move(k), std::move(v), std::move(d1), std::move(d2), parity);
    }

    static RadialFunction constant(double value, double r_max) {
        return from_pieces({0.0, r_max}, {{value}}, Parity::even);
    }

    /// sum_k coeffs[k] r^k on [0, r_max], one exact piece.
    static RadialFunction polynomial(const std::vector<double>& coeffs, double r_max, Parity parity = Parity::none) {
        if (coeffs.empty()) throw std::invalid_argument("RadialFunction::polynomial: no coefficients");
        if (!(r_max > 0.0)) throw std::invalid_argument("RadialFunction::polynomial: need r_max > 0");
        return from_pieces({0.0, r_max}, {detail::reexpand(coeffs, 0.0, r_max)}, parity);
    }

    /// amplitude * (1 - r^2/a^2)^power on [0, a], zero beyond; one exact polynomial piece.
    static RadialFunction bump_power(double amplitude, double a, int power) {
        if (!(a > 0.0) || power < 3 || power > 40)
            throw std::invalid_argument("bump_power: need a > 0 and 3 <= power <= 40");
        std::vector<double> c(2 * static_cast<std::size_t>(power) + 1, 0.0);
        double binom = 1.0;
        for (int k = 0; k <= power; ++k) {
            c[2 * static_cast<std::size_t>(k)] = amplitude * binom * (k % 2 == 0 ? 1.0 : -1.0);
            binom = binom * (power - k) / (k + 1);
        }
        return from_pieces({0.0, a}, {c}, Parity::even);
    }

    Jet jet(double r) const {
        if (r < 0.0 && parity_ != Parity::none) {
            const Jet j = jet_nonneg(-r);
            if (parity_ == Parity::even) return {j.v, -j.d1, j.d2};
            return {-j.v, j.d1, -j.d2};
        }
        return jet_nonneg(r);
    }

    double operator()(double r) const { return jet(r).v; }
    double derivative(double r) const { return jet(r).d1; }
    double second_derivative(double r) const { return jet(r).d2; }

    template <std::size_t N>
    Dual<N> operator()(const Dual<N>& r) const {
        const Jet j = jet(r.v);
        return r.chain(j.v, j.d1);
    }

    /// The function r -> f(r / factor), stretching the knots by `factor`.
    RadialFunction rescaled(double factor) const {
        if (!(factor > 0.0)) throw std::invalid_argument("rescale factor must be positive");
        RadialFunction g = *this;
        for (auto& x : g.knots_) x *= factor;
        for (auto& x : g.d1_) x /= factor;
        if (g.d2_)
            for (auto& x : *g.d2_) x /= factor * factor;
        return g;
    }

    /// s * f.
    RadialFunction scaled(double s) const {
        RadialFunction g = *this;
        for (auto& x : g.values_) x *= s;
        for (auto& x : g.d1_) x *= s;
        if (g.d2_)
            for (auto& x : *g.d2_) x *= s;
        for (auto& p : g.pieces_)
            for (auto& x : p) x *= s;
        return g;
    }

    /// Pointwise sum, exact: each operand is re-expanded on the merged knots.
    friend RadialFunction operator+(const RadialFunction& f, const RadialFunction& g) {
        auto k = merged_knots(f, g);
        std::vector<std::vector<double>> pieces;
        for (std::size_t i = 0; i + 1 < k.size(); ++i) {
            auto a = f.local_polynomial(k[i], k[i + 1]);
            const auto b = g.local_polynomial(k[i], k[i + 1]);
            if (b.size() > a.size()) a.resize(b.size(), 0.0);
            for (std::size_t j = 0; j < b.size(); ++j) a[j] += b[j];
            pieces.push_back(std::move(a));
        }
        const Parity p = f.parity_ == g.parity_ ? f.parity_ : Parity::none;
        return from_pieces(std::move(k), std::move(pieces), p);
    }

    /// Pointwise product, exact on the merged knots.
    friend RadialFunction operator*(const RadialFunction& f, const RadialFunction& g) {
        auto k = merged_knots(f, g);
        std::vector<std::vector<double>> pieces;
        for (std::size_t i = 0; i + 1 < k.size(); ++i) {
            const auto a = f.local_polynomial(k[i], k[i + 1]);
            const auto b = g.local_polynomial(k[i], k[i + 1]);
            std::vector<double> c(a.size() + b.size() - 1, 0.0);
            for (std::size_t x = 0; x < a.size(); ++x)
                for (std::size_t y = 0; y < b.size(); ++y) c[x + y] += a[x] * b[y];
            pieces.push_back(std::move(c));
        }
        Parity p = Parity::none;
        if (f.parity_ != Parity::none && g.parity_ != Parity::none)
            p = f.parity_ == g.parity_ ? Parity::even : Parity::odd;
        return from_pieces(std::move(k), std::move(pieces), p);
    }

    /// f' as a function, piece by piece.
    RadialFunction derivative_function() const {
        std::vector<std::vector<double>> pieces;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const double h = knots_[i + 1] - knots_[i];
            const auto& c = pieces_[i];
            std::vector<double> d(std::max<std::size_t>(c.size() - 1, 1), 0.0);
            for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k] / h;
            pieces.push_back(std::move(d));
        }
        const Parity p = parity_ == Parity::even ? Parity::odd : parity_ == Parity::odd ? Parity::even : Parity::none;
        return from_pieces(knots_, std::move(pieces), p);
    }

    /// F with F' = f on the knot range and F(r_max) = 0.
    RadialFunction antiderivative() const {
        const std::size_t n = pieces_.size();
        std::vector<std::vector<double>> pieces(n);
        double right = 0.0;  // F at the right end of the current piece
        for (std::size_t i = n; i-- > 0;) {
            const double h = knots_[i + 1] - knots_[i];
            const auto& c = pieces_[i];
            std::vector<double> a(c.size() + 1, 0.0);
            for (std::size_t k = 0; k < c.size(); ++k) a[k + 1] = h * c[k] / static_cast<double>(k + 1);
            double total = 0.0;
            for (double x : a) total += x;
            a[0] = right - total;
            right = a[0];
            pieces[i] = std::move(a);
        }
        const Parity p = parity_ == Parity::odd ? Parity::even : Parity::none;
        return from_pieces(knots_, std::move(pieces), p);
    }

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& first_derivatives() const { return d1_; }
    const std::optional<std::vector<double>>& second_derivatives() const { return d2_; }
    const std::vector<std::vector<double>>& pieces() const { return pieces_; }
    Parity parity() const { return parity_; }
    /// True when the function is fully described by its knot data.
    bool is_hermite() const { return hermite_; }
    double r_min() const { return knots_.front(); }
    double r_max() const { return knots_.back(); }

    /// Smallest radius beyond which the function vanishes identically
    /// (infinity if the tail extension is not zero).
    double support_radius() const {
        const std::size_t n = knots_.size();
        if (values_[n - 1] != 0.0 || d1_[n - 1] != 0.0 || (d2_ && (*d2_)[n - 1] != 0.0))
            return std::numeric_limits<double>::infinity();
        std::size_t i = pieces_.size();
        const auto zero = [](const std::vector<double>& p) {
            return std::all_of(p.begin(), p.end(), [](double c) { return c == 0.0; });
        };
        while (i > 0 && zero(pieces_[i - 1])) --i;
        return knots_[i];
    }

private:
    static std::vector<double> merged_knots(const RadialFunction& f, const RadialFunction& g) {
        std::vector<double> k;
        std::merge(f.knots_.begin(), f.knots_.end(), g.knots_.begin(), g.knots_.end(), std::back_inserter(k));
        k.erase(std::unique(k.begin(), k.end()), k.end());
        return k;
    }

    void validate_knots() const {
        if (knots_.size() < 2) throw std::invalid_argument("RadialFunction needs at least two knots");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            if (!std::isfinite(knots_[i])) throw std::invalid_argument("RadialFunction: non-finite knot");
            if (i > 0 && !(knots_[i] > knots_[i - 1]))
                throw std::invalid_argument("RadialFunction: knots must be strictly increasing");
        }
        if (parity_ != Parity::none && knots_.front() < 0.0)
            throw std::invalid_argument("RadialFunction: parity-tagged functions live on r >= 0");
    }

    void validate_axis() const {
        if (knots_.front() != 0.0) return;
        if (parity_ == Parity::even && std::abs(d1_.front()) >= 1e-12)
            throw std::invalid_argument("RadialFunction: even parity requires f'(0) = 0");
        if (parity_ == Parity::odd &&
            (std::abs(values_.front()) >= 1e-12 || (d2_ && std::abs(d2_->front()) >= 1e-12)))
            throw std::invalid_argument("RadialFunction: odd parity requires f(0) = f''(0) = 0");
    }

    void build_hermite_pieces() {
        const std::size_t n = knots_.size();
        pieces_.assign(n - 1, {});
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double h = knots_[i + 1] - knots_[i];
            const double p0 = values_[i], p1 = values_[i + 1];
            const double m0 = h * d1_[i], m1 = h * d1_[i + 1];
            auto& c = pieces_[i];
            if (d2_) {
                const double a0 = h * h * (*d2_)[i], a1 = h * h * (*d2_)[i + 1];
                const double D = p1 - p0 - m0 - 0.5 * a0;
                const double E = m1 - m0 - a0;
                const double F = a1 - a0;
                c = {p0, m0, 0.5 * a0, 10.0 * D - 4.0 * E + 0.5 * F, -15.0 * D + 7.0 * E - F, 6.0 * D - 3.0 * E + 0.5 * F};
            } else {
                c = {p0, m0, 3.0 * (p1 - p0) - 2.0 * m0 - m1, 2.0 * (p0 - p1) + m0 + m1};
            }
        }
    }

    Jet end_taylor(std::size_t i, double r) const {
        const double dr = r - knots_[i];
        const double a = d2_ ? (*d2_)[i] : 0.0;
        return {values_[i] + d1_[i] * dr + 0.5 * a * dr * dr, d1_[i] + a * dr, a};
    }

    Jet piece(std::size_t i, double r) const {
        const double h = knots_[i + 1] - knots_[i];
        const Jet j = detail::horner(pieces_[i], (r - knots_[i]) / h);
        return {j.v, j.d1 / h, j.d2 / (h * h)};
    }

    Jet jet_nonneg(double r) const {
        if (r <= knots_.front()) {
            if (r == knots_.front()) return piece(0, r);
            return end_taylor(0, r);
        }
        if (r >= knots_.back()) {
            if (r == knots_.back()) return piece(pieces_.size() - 1, r);
            return end_taylor(knots_.size() - 1, r);
        }
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
        return piece(static_cast<std::size_t>(it - knots_.begin()) - 1, r);
    }

    /// Monomial coefficients of f on [u, v] in the local coordinate (r - u)/(v - u).
    /// [u, v] must lie inside one piece or inside one extension region.
    std::vector<double> local_polynomial(double u, double v) const {
        if (v <= knots_.front() || u >= knots_.back()) {
            const bool left = v <= knots_.front();
            if (left && u < 0.0 && parity_ != Parity::none)
                throw std::invalid_argument("RadialFunction sum: reflected region is not polynomial");
            const std::size_t i = left ? 0 : knots_.size() - 1;
            const double a = d2_ ? (*d2_)[i] : 0.0;
            return detail::reexpand({values_[i], d1_[i], 0.5 * a}, u - knots_[i], v - u);
        }
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), 0.5 * (u + v));
        const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
        const double h = knots_[i + 1] - knots_[i];
        return detail::reexpand(pieces_[i], (u - knots_[i]) / h, (v - u) / h);
    }

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> d1_;
    std::optional<std::vector<double>> d2_;
    Parity parity_ = Parity::none;
    bool hermite_ = true;
    std::vector<std::vector<double>> pieces_;
};

}  // namespace systolic::numerics
