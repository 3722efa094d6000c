#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "lle/rational.hpp"

namespace lle {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
    if (ec != std::errc{}) return std::to_string(x);
    return std::string(buffer, end);
}

inline std::string format_scalar(double x) { return format_double(x); }
inline std::string format_scalar(long double x) { return format_double(static_cast<double>(x)); }
inline std::string format_scalar(const Rational& r) { return to_string(r); }

}  // namespace lle
