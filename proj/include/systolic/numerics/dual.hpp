#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace systolic::numerics {

/// Forward-mode dual number carrying N partial derivatives.
template <std::size_t N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    constexpr Dual() = default;
    constexpr Dual(double value) : v(value) {}  // NOLINT: implicit constant lift
    constexpr Dual(double value, std::array<double, N> grad) : v(value), d(grad) {}

    static constexpr Dual variable(double value, std::size_t index) {
        Dual x(value);
        x.d[index] = 1.0;
        return x;
    }

    friend constexpr Dual operator+(const Dual& a, const Dual& b) {
        Dual r(a.v + b.v);
        for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
        return r;
    }
    friend constexpr Dual operator-(const Dual& a, const Dual& b) {
        Dual r(a.v - b.v);
        for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
        return r;
    }
    friend constexpr Dual operator-(const Dual& a) {
        Dual r(-a.v);
        for (std::size_t i = 0; i < N; ++i) r.d[i] = -a.d[i];
        return r;
    }
    friend constexpr Dual operator*(const Dual& a, const Dual& b) {
        Dual r(a.v * b.v);
        for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
        return r;
    }
    friend constexpr Dual operator/(const Dual& a, const Dual& b) {
        Dual r(a.v / b.v);
        const double inv2 = 1.0 / (b.v * b.v);
        for (std::size_t i = 0; i < N; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
        return r;
    }

    /// Applies a scalar function given its value and derivative at v.
    constexpr Dual chain(double fv, double dfv) const {
        Dual r(fv);
        for (std::size_t i = 0; i < N; ++i) r.d[i] = dfv * d[i];
        return r;
    }
};

template <std::size_t N>
Dual<N> sqrt(const Dual<N>& a) {
    const double s = std::sqrt(a.v);
    return a.chain(s, 0.5 / s);
}

}  // namespace systolic::numerics
