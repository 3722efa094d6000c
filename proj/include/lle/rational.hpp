#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>
#include <type_traits>

#include "lle/errors.hpp"

namespace lle {

/// Arbitrary-precision rational, the exact scalar of the moment recurrences.
using Rational = mpq_class;

/// Parses "p", "p/q", or a decimal literal such as "-0.125" or "2.5e-3" exactly.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t first = 0;
    while (first < s.size() && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
    s = s.substr(first);
    if (s.empty()) throw ValidationError("empty number");

    auto bad = [&] { return ValidationError("not a rational number: '" + s + "'"); };

    if (s.find('/') != std::string::npos) {
        Rational r;
        if (r.set_str(s, 10) != 0) throw bad();
        if (r.get_den() == 0) throw bad();
        r.canonicalize();
        return r;
    }

    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';

    std::string digits;
    long scale = 0;
    bool seen_point = false;
    bool any_digit = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            any_digit = true;
            if (seen_point) --scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) throw bad();

    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') throw bad();
        ++pos;
        std::size_t used = 0;
        long exponent = 0;
        try {
            exponent = std::stol(s.substr(pos), &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (pos + used != s.size()) throw bad();
        if (exponent > 4096 || exponent < -4096) throw bad();
        scale += exponent;
    }

    mpz_class numerator(digits, 10);
    if (negative) numerator = -numerator;
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational r = scale < 0 ? Rational(numerator, power) : Rational(numerator * power);
    r.canonicalize();
    return r;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double x) { return x; }
inline double to_double(long double x) { return static_cast<double>(x); }

/// Scalar conversion used by code templated on the scalar tower.
template <class S>
S from_rational(const Rational& r) {
    if constexpr (std::is_same_v<S, Rational>) {
        return r;
    } else {
        return static_cast<S>(r.get_d());
    }
}

template <class S>
S from_int(long v) {
    if constexpr (std::is_same_v<S, Rational>) {
        return Rational(v);
    } else {
        return static_cast<S>(v);
    }
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(long double x) { return x == 0.0L; }

}  // namespace lle
