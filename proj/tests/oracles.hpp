#pragma once

// Reference computations the library does not use: power-series coefficient
// extraction, quadrature, determinants, finite differences and sample statistics.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;
// Bivariate polynomial in (w, wb): exponent pair -> coefficient.
using Poly = std::map<std::pair<int, int>, Q>;

inline Q binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Q(r);
}

inline Poly multiply(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) out[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
    }
    return out;
}

// Coefficient of w^a wb^b in P(w, wb) / (1 - w wb)^p, using
// 1/(1-x)^p = sum_k C(k+p-1, p-1) x^k.
inline Q coefficient(const Poly& numerator, int p, int a, int b) {
    Q sum = 0;
    for (const auto& [e, c] : numerator) {
        const int da = a - e.first;
        const int db = b - e.second;
        if (da < 0 || da != db) continue;
        sum += c * binomial(da + p - 1, p - 1);
    }
    return sum;
}

inline Poly one_minus_w_times_one_minus_wb() {
    return {{{0, 0}, 1}, {{1, 0}, -1}, {{0, 1}, -1}, {{1, 1}, 1}};
}

// (1-w)(1-wb)/(1-w wb)^3
inline Q case1_coefficient(int a, int b) { return coefficient(one_minus_w_times_one_minus_wb(), 3, a, b); }

// (1-w)(1-wb)(1 + w wb - w - wb)/(1-w wb)^4
inline Q case2_coefficient(int a, int b) {
    const Poly bracket = {{{0, 0}, 1}, {{1, 1}, 1}, {{1, 0}, -1}, {{0, 1}, -1}};
    return coefficient(multiply(one_minus_w_times_one_minus_wb(), bracket), 4, a, b);
}

// |F'|^2 of F(w) = (w+1)^2/w is (1 - w^-2)(1 - wb^-2); coefficient of w^-a wb^-b.
inline Q kappa0_exterior_coefficient(int a, int b) {
    auto c = [](int e) { return e == 0 ? Q(1) : e == 2 ? Q(-1) : Q(0); };
    return c(a) * c(b);
}

// Composite Simpson rule on [lo, hi] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int panels = 2000) {
    const double h = (hi - lo) / panels;
    double s = f(lo) + f(hi);
    for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
    return s * h / 3.0;
}

// Compound Poisson exponent for a jump density on (-pi, pi): rate * int (1 - cos m phi) p(phi).
inline double jump_exponent(double rate, const std::function<double(double)>& density, int m) {
    return rate * simpson([&](double phi) { return (1.0 - std::cos(m * phi)) * density(phi); }, -std::numbers::pi,
                          std::numbers::pi);
}

inline double det3(const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// det(T - x I) for a 3x3 matrix.
inline double char_poly3(const double t[3][3], double x) {
    double m[3][3];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = t[i][j] - (i == j ? x : 0.0);
    }
    return det3(m);
}

inline std::complex<double> central_difference(const std::function<std::complex<double>(std::complex<double>)>& f,
                                               std::complex<double> w, double h) {
    return (f(w + h) - f(w - h)) / (2.0 * h);
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double fourth_central = 0.0;
    std::size_t n = 0;

    double mean_se() const { return std::sqrt(variance / static_cast<double>(n)); }
    // Standard error of the sample variance.
    double variance_se() const {
        return std::sqrt((fourth_central - variance * variance) / static_cast<double>(n));
    }
};

inline Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.n = xs.size();
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m.n);
    double s2 = 0.0, s4 = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        s2 += d * d;
        s4 += d * d * d * d;
    }
    m.variance = s2 / static_cast<double>(m.n - 1);
    m.fourth_central = s4 / static_cast<double>(m.n);
    return m;
}

}  // namespace oracle
