#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace systolic::certify {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Integer pow10(int k) {
    Integer p = 1;
    for (int i = 0; i < k; ++i) p *= 10;
    return p;
}

/// "3", "-1/7", "0.01", "2.5e-3": the exact value of the literal as written.
inline Rational parse_rational(std::string_view text) {
    const auto bad = [&] { return std::invalid_argument("not a rational literal: '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = parse_rational(text.substr(0, slash));
        const auto den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw bad();
        return num / den;
    }
    std::string_view s = text;
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    int exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        const auto ex = s.substr(e + 1);
        const auto [ptr, ec] = std::from_chars(ex.data() + (ex.starts_with('+') ? 1 : 0), ex.data() + ex.size(), exponent);
        if (ec != std::errc() || ptr != ex.data() + ex.size()) throw bad();
        s = s.substr(0, e);
    }
    std::string digits;
    int fraction = 0;
    bool seen_point = false;
    for (char ch : s) {
        if (ch == '.' && !seen_point) {
            seen_point = true;
        } else if (ch >= '0' && ch <= '9') {
            digits += ch;
            fraction += seen_point ? 1 : 0;
        } else {
            throw bad();
        }
    }
    if (digits.empty()) throw bad();
    // cpp_int takes a leading 0 as an octal prefix
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    Rational r{Integer(digits)};
    exponent -= fraction;
    if (exponent >= 0) r *= pow10(exponent);
    else r /= pow10(-exponent);
    return negative ? Rational(-r) : r;
}

/// The decimal a double prints as (shortest round-trip form), read back exactly: 0.01 -> 1/100.
inline Rational decimal_rational(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("decimal_rational: non-finite value");
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("decimal_rational: formatting failed");
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

/// A rational no smaller (upper) or no larger (lower) than the double, for conservative rounding.
inline Rational rational_above(double x) { return Rational(std::nextafter(x, std::numeric_limits<double>::infinity())); }
inline Rational rational_below(double x) { return Rational(std::nextafter(x, -std::numeric_limits<double>::infinity())); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace systolic::certify
