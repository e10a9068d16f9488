#pragma once

// Scalar layer: every algorithm in this library is templated on T, where T is
// either `double` (tolerance-based comparisons) or `freelip::Rational`
// (arbitrary-precision exact arithmetic). The mode is chosen once per run.

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace freelip {

// et_off: plain value semantics, no expression templates leaking into the
// scalar-generic code.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

template <class T>
T default_tolerance() {
    if constexpr (is_exact_v<T>) {
        return T(0);
    } else {
        return T(1e-9);
    }
}

// a <= b up to tol (tol ignored in exact mode, where it is 0).
template <class T>
bool leq(const T& a, const T& b, const T& tol) {
    return a <= b + tol;
}

template <class T>
bool approx_eq(const T& a, const T& b, const T& tol) {
    return leq(a, b, tol) && leq(b, a, tol);
}

// Strict comparison used by certificate conditions: exact `<` in rational
// mode, `<` with a 10*tol safety margin in float mode.
template <class T>
bool certifiably_less(const T& a, const T& b, const T& tol) {
    if constexpr (is_exact_v<T>) {
        return a < b;
    } else {
        return a < b - 10 * tol;
    }
}

template <class T>
T abs_value(const T& a) {
    return a < T(0) ? T(-a) : a;
}

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return static_cast<double>(v); }

// Value from the extended line [-inf, +reals]; the -inf marker appears in
// path closures touched by a negative cycle.
template <class T>
struct Extended {
    bool neg_inf = false;
    T value{};

    static Extended minus_infinity() { return Extended{true, T{}}; }
    static Extended finite(T v) { return Extended{false, std::move(v)}; }

    bool is_finite() const { return !neg_inf; }

    friend bool operator<(const Extended& a, const Extended& b) {
        if (a.neg_inf) return !b.neg_inf;
        if (b.neg_inf) return false;
        return a.value < b.value;
    }
};

// Exact decimal parsing: "3", "-0.125", "2.5e-3", and (rational mode) "p/q".
// Rationals carry the value exactly; doubles go through the usual strtod path.
inline Rational rational_from_decimal(const std::string& text) {
    using Int = boost::multiprecision::cpp_int;
    std::size_t pos = 0;
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("not a number: '" + text + "'");
    };
    if (text.empty()) fail();

    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0) fail();
        return Rational(num, den);
    }

    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    Int mantissa = 0;
    long frac_digits = 0;
    bool any_digit = false;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
        mantissa = mantissa * 10 + (text[pos] - '0');
        any_digit = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
            mantissa = mantissa * 10 + (text[pos] - '0');
            ++frac_digits;
            any_digit = true;
        }
    }
    if (!any_digit) fail();
    long exponent = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_neg = text[pos] == '-';
            ++pos;
        }
        if (pos == text.size()) fail();
        for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos)
            exponent = exponent * 10 + (text[pos] - '0');
        if (exp_neg) exponent = -exponent;
    }
    if (pos != text.size()) fail();

    long shift = exponent - frac_digits;
    Int num = mantissa, den = 1;
    if (shift >= 0)
        num *= boost::multiprecision::pow(Int(10), static_cast<unsigned>(shift));
    else
        den = boost::multiprecision::pow(Int(10), static_cast<unsigned>(-shift));
    Rational r(num, den);
    return negative ? Rational(-r) : r;
}

template <class T>
T scalar_from_decimal(const std::string& text) {
    if constexpr (is_exact_v<T>) {
        return rational_from_decimal(text);
    } else {
        double v = 0;
        const char* first = text.data();
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) throw std::invalid_argument("not a number: '" + text + "'");
        return v;
    }
}

// A double reinterpreted as the rational it exactly is.
inline Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
    return Rational(v);
}

inline std::string fraction_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

// Fixed-point decimal rendering of a rational, truncated toward zero.
// Deterministic; used for report echoing next to the exact fraction.
inline std::string decimal_string(const Rational& r, unsigned digits = 12) {
    using Int = boost::multiprecision::cpp_int;
    Int num = numerator(r), den = denominator(r);
    std::string sign = num < 0 ? "-" : "";
    if (num < 0) num = -num;
    Int whole = num / den, rem = num % den;
    std::string out = sign + whole.str();
    if (digits == 0) return out;
    out += '.';
    for (unsigned i = 0; i < digits; ++i) {
        rem *= 10;
        out += static_cast<char>('0' + static_cast<long>(rem / den));
        rem %= den;
    }
    return out;
}

} // namespace freelip
