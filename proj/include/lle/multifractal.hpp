#pragma once

// Discrete Legendre-transform calculus between beta(q), f(alpha),
// omega(alpha), tau(q) and D(q) on sampled grids.

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lle/errors.hpp"
#include "lle/format.hpp"

namespace lle {

/// ok: interior optimum; boundary: optimum attained at the edge of the
/// searched grid; absent: no value (negative f removed, -inf, empty search);
/// limit: removable singularity filled by a difference quotient.
enum class Flag { ok, boundary, absent, limit };

inline const char* to_string(Flag f) {
    switch (f) {
        case Flag::ok: return "ok";
        case Flag::boundary: return "boundary";
        case Flag::absent: return "absent";
        case Flag::limit: return "limit";
    }
    return "?";
}

inline Flag parse_flag(std::string_view s) {
    if (s == "ok") return Flag::ok;
    if (s == "boundary") return Flag::boundary;
    if (s == "absent") return Flag::absent;
    if (s == "limit") return Flag::limit;
    throw ValidationError("unknown flag '" + std::string(s) + "'");
}

enum class SpectrumLabel { beta, f, omega, tau, dimension };

class SpectrumGrid {
public:
    SpectrumGrid(SpectrumLabel label, std::vector<double> x, std::vector<double> y, std::vector<Flag> flags = {})
        : label_(label), x_(std::move(x)), y_(std::move(y)), flags_(std::move(flags)) {
        if (flags_.empty()) flags_.assign(x_.size(), Flag::ok);
        if (x_.size() != y_.size() || x_.size() != flags_.size()) throw ValidationError("spectrum grid length mismatch");
        for (std::size_t k = 1; k < x_.size(); ++k) {
            if (!(x_[k] > x_[k - 1])) throw ValidationError("spectrum grid abscissae must be strictly increasing");
        }
        for (std::size_t k = 0; k < x_.size(); ++k) {
            if (flags_[k] != Flag::absent && !std::isfinite(y_[k])) {
                throw ValidationError("non-finite ordinate must be flagged absent");
            }
        }
    }

    SpectrumLabel label() const noexcept { return label_; }
    std::size_t size() const noexcept { return x_.size(); }
    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> y() const noexcept { return y_; }
    std::span<const Flag> flags() const noexcept { return flags_; }
    bool present(std::size_t k) const { return flags_[k] != Flag::absent; }

private:
    SpectrumLabel label_;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<Flag> flags_;
};

namespace detail {

// Optimum of objective(x_k, y_k) over present entries, flagged boundary when
// attained at the first or last present entry.
template <class Objective>
std::pair<double, Flag> extremum(const SpectrumGrid& g, Objective objective, bool minimize) {
    std::optional<std::size_t> first, last, best;
    double best_value = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!g.present(k)) continue;
        if (!first) first = k;
        last = k;
        const double v = objective(g.x()[k], g.y()[k]);
        if (!best || (minimize ? v < best_value : v > best_value)) {
            best = k;
            best_value = v;
        }
    }
    if (!best) return {0.0, Flag::absent};
    const bool edge = g.size() > 1 && (*best == *first || *best == *last);
    return {best_value, edge ? Flag::boundary : Flag::ok};
}

inline void check_grid(std::span<const double> grid) {
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) throw ValidationError("output grid must be strictly increasing");
    }
}

}  // namespace detail

/// f(alpha) = inf_q [q + alpha (beta(q) + 1 - q)].
inline SpectrumGrid f_from_beta(const SpectrumGrid& beta, std::span<const double> alphas) {
    if (beta.size() == 0) throw ValidationError("beta grid is empty");
    detail::check_grid(alphas);
    std::vector<double> y;
    std::vector<Flag> flags;
    for (double a : alphas) {
        auto [v, flag] = detail::extremum(beta, [a](double q, double b) { return q + a * (b + 1.0 - q); }, true);
        y.push_back(v);
        flags.push_back(flag);
    }
    return {SpectrumLabel::f, {alphas.begin(), alphas.end()}, std::move(y), std::move(flags)};
}

/// beta(q) = sup_alpha [q - 1 + (f(alpha) - q) / alpha].
inline SpectrumGrid beta_from_f(const SpectrumGrid& f, std::span<const double> qs) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!(f.x()[k] > 0)) throw ValidationError("alpha grid must be strictly positive");
    }
    detail::check_grid(qs);
    std::vector<double> y;
    std::vector<Flag> flags;
    for (double q : qs) {
        auto [v, flag] = detail::extremum(f, [q](double a, double fa) { return q - 1.0 + (fa - q) / a; }, false);
        y.push_back(v);
        flags.push_back(flag);
    }
    return {SpectrumLabel::beta, {qs.begin(), qs.end()}, std::move(y), std::move(flags)};
}

/// omega(a) = a f(1/a) on the reciprocal abscissae a = 1/alpha.
inline SpectrumGrid omega_from_f(const SpectrumGrid& f) {
    std::vector<double> x, y;
    std::vector<Flag> flags;
    for (std::size_t k = f.size(); k-- > 0;) {
        const double alpha = f.x()[k];
        if (!(alpha > 0)) throw ValidationError("alpha grid must be strictly positive");
        x.push_back(1.0 / alpha);
        y.push_back(f.present(k) ? f.y()[k] / alpha : 0.0);
        flags.push_back(f.flags()[k]);
    }
    return {SpectrumLabel::omega, std::move(x), std::move(y), std::move(flags)};
}

/// beta(q) = sup_a [omega(a) - (a - 1) q] - 1. Counting eps^{-omega} arcs of
/// length eps gives the integral means eps^{1 - omega + q(a-1)}; the -1 is that
/// arc length, which makes this form agree with `beta_from_f`.
inline SpectrumGrid beta_from_omega(const SpectrumGrid& omega, std::span<const double> qs) {
    detail::check_grid(qs);
    std::vector<double> y;
    std::vector<Flag> flags;
    for (double q : qs) {
        auto [v, flag] = detail::extremum(omega, [q](double a, double w) { return w - (a - 1.0) * q; }, false);
        y.push_back(flag == Flag::absent ? 0.0 : v - 1.0);
        flags.push_back(flag);
    }
    return {SpectrumLabel::beta, {qs.begin(), qs.end()}, std::move(y), std::move(flags)};
}

struct TauAndDimensions {
    SpectrumGrid tau;
    SpectrumGrid dimensions;
};

/// tau(q) = inf_alpha [q alpha - f(alpha)] and D(q) = tau(q) / (q - 1). At q = 1
/// D is the central difference quotient of tau, flagged `limit`.
inline TauAndDimensions tau_and_dimensions(const SpectrumGrid& f, std::span<const double> qs) {
    detail::check_grid(qs);
    std::vector<double> tau;
    std::vector<Flag> tau_flags;
    for (double q : qs) {
        auto [v, flag] = detail::extremum(f, [q](double a, double fa) { return q * a - fa; }, true);
        tau.push_back(v);
        tau_flags.push_back(flag);
    }
    std::vector<double> dims(qs.size(), 0.0);
    std::vector<Flag> dim_flags(qs.size(), Flag::ok);
    for (std::size_t k = 0; k < qs.size(); ++k) {
        if (tau_flags[k] == Flag::absent) {
            dim_flags[k] = Flag::absent;
            continue;
        }
        if (std::abs(qs[k] - 1.0) > 1e-12) {
            dims[k] = tau[k] / (qs[k] - 1.0);
            dim_flags[k] = tau_flags[k];
            continue;
        }
        if (k == 0 || k + 1 == qs.size() || tau_flags[k - 1] == Flag::absent || tau_flags[k + 1] == Flag::absent) {
            dim_flags[k] = Flag::absent;
            continue;
        }
        dims[k] = (tau[k + 1] - tau[k - 1]) / (qs[k + 1] - qs[k - 1]);
        dim_flags[k] = Flag::limit;
    }
    std::vector<double> q_copy(qs.begin(), qs.end());
    return {SpectrumGrid(SpectrumLabel::tau, q_copy, std::move(tau), std::move(tau_flags)),
            SpectrumGrid(SpectrumLabel::dimension, q_copy, std::move(dims), std::move(dim_flags))};
}

struct PositivePart {
    SpectrumGrid f;
    std::optional<std::pair<double, double>> support;  // empty when no alpha has f >= 0
};

/// Drops alpha with f(alpha) < 0 (zero-probability exponents).
inline PositivePart positive_truncation(const SpectrumGrid& f) {
    if (f.label() != SpectrumLabel::f) throw ValidationError("positive_truncation expects an f(alpha) grid");
    std::vector<double> y(f.y().begin(), f.y().end());
    std::vector<Flag> flags(f.flags().begin(), f.flags().end());
    std::optional<std::pair<double, double>> support;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!f.present(k)) continue;
        if (y[k] < 0) {
            flags[k] = Flag::absent;
            continue;
        }
        if (!support) support = std::make_pair(f.x()[k], f.x()[k]);
        support->second = f.x()[k];
    }
    return {SpectrumGrid(SpectrumLabel::f, {f.x().begin(), f.x().end()}, std::move(y), std::move(flags)), support};
}

/// Evenly spaced grid from `lo` to `hi` with `n` points.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw ValidationError("linspace needs n >= 2 and hi > lo");
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

inline void write_spectrum_grid_csv(std::ostream& out, const SpectrumGrid& g) {
    out << "x,y,flag\n";
    for (std::size_t k = 0; k < g.size(); ++k) {
        out << format_double(g.x()[k]) << ',' << (g.present(k) ? format_double(g.y()[k]) : std::string()) << ','
            << to_string(g.flags()[k]) << '\n';
    }
}

inline SpectrumGrid read_spectrum_grid_csv(std::istream& in, SpectrumLabel label) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty spectrum CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,y,flag" && line != "x,y") throw ValidationError("spectrum CSV header must be 'x,y,flag'");
    std::vector<double> x, y;
    std::vector<Flag> flags;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (cells.size() < 2 || cells.size() > 3) throw ValidationError("bad spectrum CSV row: '" + line + "'");
        const Flag flag = cells.size() == 3 ? parse_flag(cells[2]) : Flag::ok;
        try {
            x.push_back(std::stod(cells[0]));
            y.push_back(flag == Flag::absent || cells[1].empty() ? 0.0 : std::stod(cells[1]));
        } catch (const std::exception&) {
            throw ValidationError("bad number in spectrum CSV row: '" + line + "'");
        }
        flags.push_back(cells[1].empty() ? Flag::absent : flag);
    }
    return SpectrumGrid(label, std::move(x), std::move(y), std::move(flags));
}

}  // namespace lle
