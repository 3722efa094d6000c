#pragma once

// Coefficient grids rho_ij of the whole-plane derivative moments <|F'|^q>,
// from the nine-term two-dimensional recurrence, in exact or floating scalars.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lle/errors.hpp"
#include "lle/format.hpp"
#include "lle/levy_driver.hpp"
#include "lle/rational.hpp"
#include "lle/slit_maps.hpp"

namespace lle {

enum class ScalarKind { exact, floating };

inline const char* to_string(ScalarKind k) { return k == ScalarKind::exact ? "exact" : "float"; }

/// m -> eta_m, from a descriptor or given directly.
template <class S>
class EtaProfile {
public:
    EtaProfile(std::function<S(long)> eta, std::string label) : eta_(std::move(eta)), label_(std::move(label)) {}

    static EtaProfile from_descriptor(const LevyDescriptor& d) {
        return EtaProfile([d](long m) { return characteristic_exponent<S>(d, m); }, to_string(d));
    }

    S operator()(long m) const { return m == 0 ? from_int<S>(0) : eta_(m < 0 ? -m : m); }
    const std::string& label() const noexcept { return label_; }

private:
    std::function<S(long)> eta_;
    std::string label_;
};

/// rho_ij on [lo..N]^2 with lo = 1 (interior) or lo = -1 (exterior); entries
/// below the range are zero.
template <class S>
class MomentGrid {
public:
    MomentGrid(Version version, S q, int n, std::string eta_label)
        : version_(version),
          q_(std::move(q)),
          n_(n),
          lo_(version == Version::interior ? 1 : -1),
          eta_label_(std::move(eta_label)),
          data_(static_cast<std::size_t>(side()) * static_cast<std::size_t>(side()), from_int<S>(0)) {}

    Version version() const noexcept { return version_; }
    const S& q() const noexcept { return q_; }
    int size() const noexcept { return n_; }
    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return n_; }
    int side() const noexcept { return n_ - lo_ + 1; }
    const std::string& eta_label() const noexcept { return eta_label_; }
    bool contains(int i, int j) const noexcept { return i >= lo_ && j >= lo_ && i <= n_ && j <= n_; }

    const S& at(int i, int j) const { return data_[index(i, j)]; }
    S& at(int i, int j) { return data_[index(i, j)]; }

    /// rho_ij, zero outside the stored range.
    S value(int i, int j) const {
        if (i < lo_ || j < lo_) return from_int<S>(0);
        if (i > n_ || j > n_) throw ValidationError("grid index beyond computed size");
        return at(i, j);
    }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i - lo_) * static_cast<std::size_t>(side()) + static_cast<std::size_t>(j - lo_);
    }

    Version version_;
    S q_;
    int n_;
    int lo_;
    std::string eta_label_;
    std::vector<S> data_;
};

namespace detail {

// Accumulator wide enough for the floating tower.
template <class S>
using Accumulator = std::conditional_t<std::is_same_v<S, Rational>, Rational, long double>;

// Cached eta_m for |m| <= limit.
template <class S>
class EtaTable {
public:
    EtaTable(const EtaProfile<S>& eta, int limit) : limit_(limit) {
        values_.reserve(static_cast<std::size_t>(limit) + 1);
        for (long m = 0; m <= limit; ++m) {
            S v = eta(m);
            if (m == 0 && !is_zero(v)) throw ValidationError("eta_0 must be 0");
            if (v < 0) throw ValidationError("eta_" + std::to_string(m) + " is negative");
            if (eta(-m) != v) throw ValidationError("eta profile is not symmetric at m = " + std::to_string(m));
            values_.push_back(std::move(v));
        }
    }
    const S& operator()(int m) const { return values_[static_cast<std::size_t>(m < 0 ? -m : m)]; }

private:
    int limit_;
    std::vector<S> values_;
};

}  // namespace detail

/// Nine recurrence coefficients C^{lm}_{ij}, l, m in {0, 1, 2}.
template <class S>
struct RecurrenceStencil {
    S c[3][3];
};

template <class S>
RecurrenceStencil<S> recurrence_stencil(Version version, const detail::EtaTable<S>& eta, const S& q, int i, int j) {
    const S I = from_int<S>(i);
    const S J = from_int<S>(j);
    auto upper = [&](int a, int b, const S& A, const S& B) {
        // Coefficients for (l, m) with l <= m at position (a, b); C^{lm}_{ab} = C^{ml}_{ba}.
        RecurrenceStencil<S> s;
        if (version == Version::interior) {
            s.c[0][0] = -eta(a - b) - A - B + 2;
            s.c[1][1] = -4 * (eta(a - b) - 2 * q);
            s.c[2][2] = -eta(a - b) + A + B - 6 + 2 * q;
            s.c[0][1] = 2 * (eta(a - b + 1) + A - 1 - q);
            s.c[0][2] = -eta(a - b + 2) + B - A - 2 + q;
            s.c[1][2] = 2 * (eta(a - b + 1) + 3 - B - 2 * q);
        } else {
            s.c[0][0] = -eta(a - b) - A - B - 2;
            s.c[1][1] = -4 * eta(a - b);
            s.c[2][2] = -eta(a - b) + A + B - 2 - 2 * q;
            s.c[0][1] = 2 * (eta(a - b + 1) + A + 1);
            s.c[0][2] = -eta(a - b + 2) + B - A - 2 - q;
            s.c[1][2] = 2 * (eta(a - b + 1) - B + 1 + q);
        }
        return s;
    };
    RecurrenceStencil<S> direct = upper(i, j, I, J);
    RecurrenceStencil<S> swapped = upper(j, i, J, I);
    direct.c[1][0] = swapped.c[0][1];
    direct.c[2][0] = swapped.c[0][2];
    direct.c[2][1] = swapped.c[1][2];
    return direct;
}

/// Fills rho_ij row by row from the unit boundary cell, solving each cell from
/// its eight already-known neighbours.
template <class S>
MomentGrid<S> build_grid(Version version, const EtaProfile<S>& eta, const S& q, int n) {
    if (n < 1) throw ValidationError("grid size N must be >= 1");
    MomentGrid<S> grid(version, q, n, eta.label());
    const int lo = grid.lo();
    const detail::EtaTable<S> table(eta, n - lo + 3);

    for (int i = lo; i <= n; ++i) {
        for (int j = lo; j <= n; ++j) {
            if (i == lo && j == lo) {
                grid.at(i, j) = from_int<S>(1);
                continue;
            }
            const auto st = recurrence_stencil(version, table, q, i, j);
            detail::Accumulator<S> sum = 0;
            for (int l = 0; l <= 2; ++l) {
                for (int m = 0; m <= 2; ++m) {
                    if ((l == 0 && m == 0) || i - l < lo || j - m < lo) continue;
                    const S& neighbour = grid.at(i - l, j - m);
                    if (is_zero(neighbour)) continue;
                    sum += detail::Accumulator<S>(st.c[l][m]) * detail::Accumulator<S>(neighbour);
                }
            }
            const S& pivot = st.c[0][0];
            if (is_zero(pivot)) throw PivotError(i, j);
            if constexpr (std::is_same_v<S, Rational>) {
                grid.at(i, j) = -sum / pivot;
            } else {
                grid.at(i, j) = static_cast<S>(-sum / static_cast<long double>(pivot));
            }
        }
    }
    return grid;
}

template <class S>
MomentGrid<S> build_grid(Version version, const LevyDescriptor& d, const S& q, int n) {
    return build_grid(version, EtaProfile<S>::from_descriptor(d), q, n);
}

/// Left side of the (i, j) recurrence relation evaluated on the grid; zero for
/// every cell except the boundary one.
template <class S>
S recurrence_residual(const MomentGrid<S>& grid, const EtaProfile<S>& eta, int i, int j) {
    const detail::EtaTable<S> table(eta, grid.size() - grid.lo() + 3);
    const auto st = recurrence_stencil(grid.version(), table, grid.q(), i, j);
    S sum = from_int<S>(0);
    for (int l = 0; l <= 2; ++l) {
        for (int m = 0; m <= 2; ++m) sum += st.c[l][m] * grid.value(i - l, j - m);
    }
    return sum;
}

/// Exactly solved interior q = 2 moments: case 1 (eta_1 = 3) gives
/// (1-w)(1-wb)/(1-w wb)^3, case 2 (eta_1 = 1) gives
/// (1-w)(1-wb)(theta_0 + (w+wb) theta_1) with theta_0 = (1+xi)/(1-xi)^4,
/// theta_1 = -1/(1-xi)^4. For case 2 this is the whole moment only when also
/// eta_2 = 4 (Brownian kappa = 2); otherwise theta_2, theta_3, ... add terms
/// off the diagonal band. `w` and `wb` are independent arguments.
template <class T>
T closed_form_reference(int which, const T& w, const T& wb) {
    if (which != 1 && which != 2) throw ValidationError("closed form case must be 1 or 2");
    const T one(1);
    const T xi = w * wb;
    const T gap = one - xi;
    if (gap == T(0)) throw SingularityError("closed form evaluated on |w wb| = 1");
    const T prefactor = (one - w) * (one - wb);
    if (which == 1) return prefactor / (gap * gap * gap);
    const T g4 = gap * gap * gap * gap;
    return prefactor * ((one + xi) - (w + wb)) / g4;
}

struct RhoValue {
    double value = 0.0;
    double tail_bound = 0.0;
    bool tail_warning = false;
};

/// Truncated double series at (w, conj w): sum rho_ij w^{i-1} wb^{j-1}
/// (interior) or sum rho_ij w^{-(i+1)} wb^{-(j+1)} (exterior). The tail bound
/// extrapolates the last shell geometrically using the ratio of the last two
/// diagonal terms.
template <class S>
RhoValue rho_eval(const MomentGrid<S>& grid, Complex w) {
    Complex x;
    if (grid.version() == Version::interior) {
        if (!(std::abs(w) < 1)) throw ValidationError("interior series needs |w| < 1");
        x = w;
    } else {
        if (!(std::abs(w) > 1)) throw ValidationError("exterior series needs |w| > 1");
        x = 1.0 / w;
    }
    const int side = grid.side();
    const int lo = grid.lo();
    std::vector<Complex> powers(static_cast<std::size_t>(side));
    powers[0] = 1.0;
    for (int k = 1; k < side; ++k) powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k - 1)] * x;
    const double radius = std::abs(x);

    std::vector<double> shells(static_cast<std::size_t>(side), 0.0);
    Complex total = 0.0;
    for (int a = 0; a < side; ++a) {
        for (int b = 0; b < side; ++b) {
            const double c = to_double(grid.at(a + lo, b + lo));
            if (c == 0.0) continue;
            total += c * powers[static_cast<std::size_t>(a)] * std::conj(powers[static_cast<std::size_t>(b)]);
            shells[static_cast<std::size_t>(std::max(a, b))] += std::abs(c) * std::pow(radius, a + b);
        }
    }

    RhoValue out;
    out.value = total.real();
    if (side >= 2) {
        const double last = shells[static_cast<std::size_t>(side - 1)];
        const double d1 = std::abs(to_double(grid.at(grid.hi(), grid.hi())));
        const double d0 = std::abs(to_double(grid.at(grid.hi() - 1, grid.hi() - 1)));
        double ratio;
        if (d0 > 0 && d1 > 0) {
            ratio = d1 / d0 * radius * radius;
        } else {
            const double before = shells[static_cast<std::size_t>(side - 2)];
            ratio = before > 0 ? last / before : (last > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        }
        out.tail_bound = last == 0.0 ? 0.0
                         : ratio < 1 ? last * ratio / (1.0 - ratio)
                                     : std::numeric_limits<double>::infinity();
    }
    out.tail_warning = out.tail_bound > 0.01 * std::abs(out.value);
    return out;
}

struct BetaEstimate {
    double beta = 0.0;
    bool degenerate = false;
    double slope = 0.0;
    double fit_residual = 0.0;  // RMS of log-log residuals in the window
    int sign_changes = 0;       // along the whole diagonal
    int window_first = 0;       // grid indices i of the fitted diagonal entries
    int window_last = 0;
    std::size_t points = 0;
};

/// beta = 1 + slope of log|rho_ii| against log n over the upper half of the
/// diagonal, dropping the last two entries; n = i - lo + 1 counts diagonal
/// entries from the boundary cell. Only the diagonal survives angular
/// integration on centred circles, so this slope is the integral-means growth.
template <class S>
BetaEstimate diagonal_beta_estimate(const MomentGrid<S>& grid) {
    if (grid.size() < 16) throw ValidationError("diagonal beta estimate needs N >= 16");
    const int lo = grid.lo();
    const int count = grid.side();
    BetaEstimate est;

    int previous_sign = 0;
    bool only_boundary = true;
    for (int i = lo; i <= grid.hi(); ++i) {
        const double d = to_double(grid.at(i, i));
        const int sign = (d > 0) - (d < 0);
        if (sign != 0 && i != lo) only_boundary = false;
        if (sign != 0 && previous_sign != 0 && sign != previous_sign) ++est.sign_changes;
        if (sign != 0) previous_sign = sign;
    }
    if (only_boundary) {
        est.degenerate = true;
        return est;
    }

    est.window_first = lo + count / 2 - 1;
    est.window_last = grid.hi() - 2;
    std::vector<double> xs, ys;
    for (int i = est.window_first; i <= est.window_last; ++i) {
        const double d = std::abs(to_double(grid.at(i, i)));
        if (d == 0.0 || !std::isfinite(d)) continue;
        xs.push_back(std::log(static_cast<double>(i - lo + 1)));
        ys.push_back(std::log(d));
    }
    est.points = xs.size();
    if (xs.size() < 2) {
        est.degenerate = true;
        return est;
    }
    const double nx = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= nx;
    my /= nx;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    est.slope = sxy / sxx;
    double ss = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double r = ys[k] - (my + est.slope * (xs[k] - mx));
        ss += r * r;
    }
    est.fit_residual = std::sqrt(ss / nx);
    est.beta = 1.0 + est.slope;
    return est;
}

template <class S>
void write_grid_csv(std::ostream& out, const MomentGrid<S>& grid) {
    out << "i,j,value\n";
    for (int i = grid.lo(); i <= grid.hi(); ++i) {
        for (int j = grid.lo(); j <= grid.hi(); ++j) out << i << ',' << j << ',' << format_scalar(grid.at(i, j)) << '\n';
    }
}

}  // namespace lle
