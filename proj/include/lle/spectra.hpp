#pragma once

// Closed-form integral-means spectra of whole-plane SLE, truncation curves of
// the three-term differential recurrence, and two independent extractors of
// the blow-up rate along them: a tridiagonal eigenproblem and direct ODE
// integration towards the regular singular point xi = 1.

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "lle/errors.hpp"
#include "lle/moment_recurrence.hpp"
#include "lle/slit_maps.hpp"

namespace lle {

/// Smaller root gamma of q = 2 gamma + kappa gamma / 2 - kappa gamma^2 / 2.
inline double gamma(double q, double kappa) {
    if (!(kappa > 0) || !std::isfinite(kappa) || !std::isfinite(q)) {
        throw ValidationError("gamma needs finite q and kappa > 0");
    }
    const double s = kappa + 4.0;
    const double disc = s * s - 8.0 * q * kappa;
    if (disc < 0) throw ValidationError("gamma: (kappa+4)^2 < 8 q kappa, no real root");
    return (s - std::sqrt(disc)) / (2.0 * kappa);
}

/// q as a function of gamma; inverse of `gamma` on its domain.
inline double q_of_gamma(double g, double kappa) { return 2.0 * g + 0.5 * kappa * g - 0.5 * kappa * g * g; }

/// Interior: Q(kappa), below which the tip singularity alone fixes the spectrum.
/// Exterior: Q+(kappa) = -(kappa+4)^2 (kappa+8) / 128.
inline double critical_q(Version version, double kappa) {
    if (!(kappa > 0) || !std::isfinite(kappa)) throw ValidationError("critical_q needs kappa > 0");
    if (version == Version::interior) {
        return (kappa * kappa + 8.0 * kappa + 12.0 - 2.0 * std::sqrt(2.0 * kappa * kappa + 16.0 * kappa + 36.0)) /
               (16.0 * kappa);
    }
    return -(kappa + 4.0) * (kappa + 4.0) * (kappa + 8.0) / 128.0;
}

enum class Branch { low, middle, high };

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::low: return "low";
        case Branch::middle: return "middle";
        case Branch::high: return "high";
    }
    return "?";
}

struct SpectrumPoint {
    double q;
    double kappa;
    double beta;
    Branch branch;
};

/// q at which the middle and high branches meet.
inline double upper_threshold(Version version, double kappa) {
    return version == Version::interior ? critical_q(Version::interior, kappa)
                                        : 3.0 * (kappa + 4.0) * (kappa + 4.0) / (32.0 * kappa);
}

inline double lower_threshold(double kappa) { return -1.0 - 3.0 * kappa / 8.0; }

inline double branch_value(Version version, Branch branch, double q, double kappa) {
    switch (branch) {
        case Branch::low: {
            const double g = gamma(q, kappa);
            return kappa * g * g / 2.0 - 2.0 * g - 1.0;
        }
        case Branch::middle: {
            const double g = gamma(q, kappa);
            return kappa * g * g / 2.0;
        }
        case Branch::high:
            if (version == Version::interior) return 3.0 * q - 0.5 - 0.5 * std::sqrt(1.0 + 2.0 * q * kappa);
            return q - (kappa + 4.0) * (kappa + 4.0) / (16.0 * kappa);
    }
    throw ValidationError("unknown branch");
}

/// Piecewise beta(q) of whole-plane SLE_kappa with its branch tag.
inline SpectrumPoint beta_closed_form(Version version, double q, double kappa) {
    if (!(kappa > 0) || !std::isfinite(kappa) || !std::isfinite(q)) {
        throw ValidationError("beta_closed_form needs finite q and kappa > 0");
    }
    Branch branch = Branch::high;
    if (q <= lower_threshold(kappa)) {
        branch = Branch::low;
    } else if (q <= upper_threshold(version, kappa)) {
        branch = Branch::middle;
    }
    return {q, kappa, branch_value(version, branch, q, kappa), branch};
}

struct Rec3Coeffs {
    double A;
    double B;
    double C;
};

/// Coefficients of xi A_{n+1} f_{n+1} + A_{1-n} f_{n-1} + (B_n + (1-xi) C_n) f_n
/// + 2 xi (xi-1) f_n' = 0.
inline Rec3Coeffs rec3_coeffs(int n, double g, double kappa) {
    const double nn = n;
    const double A = 0.5 * kappa * (nn - g) * (nn - g) + nn - 3.0 * g - 0.5 * kappa * g * (1.0 - g);
    const double B = -kappa * (nn * nn + g * g - g) + 6.0 * g;
    const double C = kappa * (nn * nn - 2.0 * g + 2.0 * g * g) / 2.0 - nn - 6.0 * g;
    return {A, B, C};
}

inline double rec3_A(int n, double g, double kappa) { return rec3_coeffs(n, g, kappa).A; }

struct TruncationPoint {
    Version version;
    int M;
    double gamma;
    double kappa;
    double q;
};

/// Point (kappa, q) on the M-th curve where the f_n expansion terminates at |n| = M.
inline TruncationPoint truncation_curve(Version version, int M, double g) {
    if (M < 0) throw ValidationError("truncation order M must be >= 0");
    if (!std::isfinite(g)) throw ValidationError("gamma must be finite");
    const double m = M;
    const double denominator = version == Version::interior ? m * m + 2.0 * m * g + 2.0 * g * g - g
                                                            : m * m + 2.0 * m * g + g;
    const double scale = std::max({1.0, m * m, g * g});
    if (std::abs(denominator) < 1e-14 * scale) throw SingularityError("truncation curve pole at this gamma");
    const double kappa = version == Version::interior ? 2.0 * (m + 3.0 * g) / denominator
                                                      : 2.0 * (m - g) / denominator;
    const double q = g * (m + g) * (2.0 * m + 1.0 + g) / denominator;
    if (!(kappa > 0)) throw ValidationError("truncation curve gives kappa <= 0 at this gamma");
    TruncationPoint p{version, M, g, kappa, q};
    if (version == Version::interior) {
        const double a = rec3_A(-M, g, kappa);
        if (std::abs(a) > 1e-10 * std::max(1.0, kappa * scale)) {
            throw NumericalError("truncation point fails A_{-M} = 0");
        }
    }
    return p;
}

/// Tridiagonal operator on n in [-M, M]: row n has B_n on the diagonal,
/// A_{n+1} coupling to n+1 and A_{1-n} coupling to n-1.
struct TridiagonalSystem {
    int M = 0;
    std::vector<double> diag;   // index n + M
    std::vector<double> upper;  // upper[r] = T(r, r+1), size 2M
    std::vector<double> lower;  // lower[r] = T(r+1, r), size 2M

    int dimension() const noexcept { return 2 * M + 1; }

    Eigen::MatrixXd dense() const {
        const int d = dimension();
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, d);
        for (int r = 0; r < d; ++r) t(r, r) = diag[static_cast<std::size_t>(r)];
        for (int r = 0; r + 1 < d; ++r) {
            t(r, r + 1) = upper[static_cast<std::size_t>(r)];
            t(r + 1, r) = lower[static_cast<std::size_t>(r)];
        }
        return t;
    }
};

inline TridiagonalSystem frobenius_system(int M, double g, double kappa) {
    if (M < 0) throw ValidationError("M must be >= 0");
    TridiagonalSystem sys;
    sys.M = M;
    for (int n = -M; n <= M; ++n) sys.diag.push_back(rec3_coeffs(n, g, kappa).B);
    for (int n = -M; n < M; ++n) {
        sys.upper.push_back(rec3_A(n + 1, g, kappa));  // row n -> column n+1
        sys.lower.push_back(rec3_A(-n, g, kappa));     // row n+1 -> column n, A_{1-(n+1)}
    }
    return sys;
}

struct FrobeniusResult {
    double lambda_max = 0.0;
    std::vector<double> eigenvector;                  // symmetric, max-abs entry = 1
    std::vector<std::complex<double>> eigenvalues;    // of T (= 2 lambda)
    TridiagonalSystem system;
};

/// Blow-up rate lambda at xi -> 1 along a truncation curve: f_n ~ (1-xi)^{-lambda} g_n
/// turns the recurrence at xi = 1 into T g = 2 lambda g. The constraint
/// f_{-n} = xi^n f_n restricts g to the reflection-symmetric class.
inline FrobeniusResult frobenius_lambda(int M, double g, double kappa) {
    FrobeniusResult out;
    out.system = frobenius_system(M, g, kappa);
    const auto& sys = out.system;
    const int d = sys.dimension();
    const Eigen::MatrixXd t = sys.dense();

    std::vector<double> values;
    std::vector<Eigen::VectorXd> vectors;

    bool symmetrizable = true;
    for (int r = 0; r + 1 < d; ++r) {
        if (!(sys.upper[static_cast<std::size_t>(r)] * sys.lower[static_cast<std::size_t>(r)] > 0)) symmetrizable = false;
    }
    if (symmetrizable) {
        // D^{-1} T D symmetric for d_{r+1} / d_r = sqrt(lower_r / upper_r).
        Eigen::VectorXd scale(d);
        scale(0) = 1.0;
        for (int r = 0; r + 1 < d; ++r) {
            scale(r + 1) = scale(r) * std::sqrt(sys.lower[static_cast<std::size_t>(r)] / sys.upper[static_cast<std::size_t>(r)]);
        }
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
        for (int r = 0; r < d; ++r) s(r, r) = t(r, r);
        for (int r = 0; r + 1 < d; ++r) {
            const double off = std::copysign(std::sqrt(sys.upper[static_cast<std::size_t>(r)] * sys.lower[static_cast<std::size_t>(r)]),
                                             sys.upper[static_cast<std::size_t>(r)]);
            s(r, r + 1) = off;
            s(r + 1, r) = off;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
        if (solver.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");
        for (int k = 0; k < d; ++k) {
            values.push_back(solver.eigenvalues()(k));
            vectors.push_back(scale.asDiagonal() * solver.eigenvectors().col(k));
            out.eigenvalues.emplace_back(solver.eigenvalues()(k), 0.0);
        }
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(t);
        if (solver.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");
        const double norm = std::max(1.0, t.cwiseAbs().maxCoeff());
        for (int k = 0; k < d; ++k) {
            const auto ev = solver.eigenvalues()(k);
            out.eigenvalues.push_back(ev);
            if (std::abs(ev.imag()) > 1e-10 * norm) continue;
            values.push_back(ev.real());
            vectors.push_back(solver.eigenvectors().col(k).real());
        }
    }

    const double norm = std::max(1.0, t.cwiseAbs().maxCoeff());
    bool found = false;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const Eigen::VectorXd& v = vectors[k];
        const Eigen::VectorXd symmetric = 0.5 * (v + v.reverse());
        if (symmetric.cwiseAbs().maxCoeff() < 1e-8 * v.cwiseAbs().maxCoeff()) continue;
        Eigen::Index at = 0;
        symmetric.cwiseAbs().maxCoeff(&at);
        const Eigen::VectorXd g_vec = symmetric / symmetric(at);
        if ((t * g_vec - values[k] * g_vec).cwiseAbs().maxCoeff() > 1e-8 * norm) continue;
        if ((g_vec - g_vec.reverse()).cwiseAbs().maxCoeff() > 1e-8) continue;
        if (!found || values[k] / 2.0 > out.lambda_max) {
            found = true;
            out.lambda_max = values[k] / 2.0;
            out.eigenvector.assign(g_vec.data(), g_vec.data() + g_vec.size());
        }
    }
    if (!found) throw NumericalError("no eigenvalue with a reflection-symmetric eigenvector");
    return out;
}

/// Solution f_0..f_M of the truncated system that is analytic at xi = 0 with
/// f_0(0) = 1. Power series up to xi = 1/2, adaptive Dormand-Prince beyond, in
/// the variable s = -log(1 - xi), where the singular point moves to infinity.
class TruncatedSystem {
public:
    TruncatedSystem(int M, double g, double kappa) : M_(M), gamma_(g), kappa_(kappa) {
        if (M < 0) throw ValidationError("M must be >= 0");
        const double scale = std::max({1.0, kappa, g * g, static_cast<double>(M) * M});
        if (std::abs(rec3_A(-M, g, kappa)) > 1e-9 * scale) {
            throw ValidationError("(gamma, kappa) is not on the interior truncation curve for this M");
        }
        for (int n = 0; n <= M + 1; ++n) coeffs_.push_back(rec3_coeffs(n, g, kappa));
        for (int n = 0; n <= M; ++n) lower_.push_back(rec3_A(1 - n, g, kappa));
        build_series();
    }

    int order() const noexcept { return M_; }

    /// f_n(0) for n = 0..M.
    std::vector<double> initial_values() const {
        std::vector<double> out;
        for (int n = 0; n <= M_; ++n) out.push_back(series_[static_cast<std::size_t>(n)][0]);
        return out;
    }

    /// f_0..f_M at each requested xi (ascending, in [0, 1)).
    std::vector<std::vector<double>> evaluate(const std::vector<double>& xis, double rel_tol = 1e-10) const {
        std::vector<std::vector<double>> out;
        out.reserve(xis.size());
        std::vector<double> times;
        for (double xi : xis) {
            if (!(xi >= 0 && xi < 1)) throw ValidationError("xi must lie in [0, 1)");
            if (xi <= kSeriesEnd) {
                out.push_back(series_at(xi));
            } else {
                out.emplace_back();
                times.push_back(-std::log1p(-xi));
            }
        }
        if (times.empty()) return out;
        if (!std::is_sorted(times.begin(), times.end())) throw ValidationError("xi values must be ascending");

        using State = std::vector<double>;
        State state = series_at(kSeriesEnd);
        std::vector<double> grid{-std::log1p(-kSeriesEnd)};
        grid.insert(grid.end(), times.begin(), times.end());
        std::vector<State> samples;
        auto observer = [&](const State& x, double) { samples.push_back(x); };
        namespace odeint = boost::numeric::odeint;
        auto stepper = odeint::make_controlled(1e-300, rel_tol, odeint::runge_kutta_dopri5<State>());
        auto rhs = [this](const State& f, State& df, double s) { derivative(f, df, s); };
        odeint::integrate_times(stepper, rhs, state, grid.begin(), grid.end(), 1e-3, observer);

        std::size_t next = 1;  // samples[0] is the series start
        for (auto& row : out) {
            if (row.empty()) row = samples.at(next++);
        }
        return out;
    }

private:
    static constexpr double kSeriesEnd = 0.5;

    // df_n/ds = (xi A_{n+1} f_{n+1} + A_{1-n} f^_{n-1} + (B_n + (1-xi) C_n) f_n) / (2 xi),
    // f^_{-1} = xi f_1, f_{M+1} = 0, 1 - xi = e^{-s}.
    void derivative(const std::vector<double>& f, std::vector<double>& df, double s) const {
        const double one_minus = std::exp(-s);
        const double xi = -std::expm1(-s);
        for (int n = 0; n <= M_; ++n) {
            const auto& c = coeffs_[static_cast<std::size_t>(n)];
            const double next = n < M_ ? coeffs_[static_cast<std::size_t>(n + 1)].A * f[static_cast<std::size_t>(n + 1)] : 0.0;
            double prev = 0.0;
            if (n == 0) {
                prev = M_ > 0 ? xi * f[1] : 0.0;
            } else {
                prev = f[static_cast<std::size_t>(n - 1)];
            }
            df[static_cast<std::size_t>(n)] =
                (xi * next + lower_[static_cast<std::size_t>(n)] * prev + (c.B + one_minus * c.C) * f[static_cast<std::size_t>(n)]) /
                (2.0 * xi);
        }
    }

    // Taylor coefficients a_{n,k}: (B_n + C_n - 2k) a_{n,k} = -[A_{n+1} a_{n+1,k-1}
    //   + A_{1-n} (f^_{n-1})_k + (2(k-1) - C_n) a_{n,k-1}], with B_n + C_n = -n(kappa n/2 + 1).
    void build_series() {
        series_.assign(static_cast<std::size_t>(M_ + 1), std::vector<double>(kTerms, 0.0));
        series_[0][0] = 1.0;
        for (int n = 1; n <= M_; ++n) {
            const auto& c = coeffs_[static_cast<std::size_t>(n)];
            const double pivot = c.B + c.C;
            if (pivot == 0.0) throw NumericalError("indeterminate initial data: B_n + C_n = 0");
        }
        for (std::size_t k = 0; k < kTerms; ++k) {
            for (int n = 0; n <= M_; ++n) {
                if (n == 0 && k == 0) continue;
                const auto& c = coeffs_[static_cast<std::size_t>(n)];
                const double kk = static_cast<double>(k);
                double rhs = 0.0;
                if (k > 0) {
                    if (n < M_) rhs += coeffs_[static_cast<std::size_t>(n + 1)].A * series_[static_cast<std::size_t>(n + 1)][k - 1];
                    rhs += (2.0 * (kk - 1.0) - c.C) * series_[static_cast<std::size_t>(n)][k - 1];
                }
                if (n == 0) {
                    if (k > 0 && M_ > 0) rhs += lower_[0] * series_[1][k - 1];
                } else {
                    rhs += lower_[static_cast<std::size_t>(n)] * series_[static_cast<std::size_t>(n - 1)][k];
                }
                series_[static_cast<std::size_t>(n)][k] = -rhs / (c.B + c.C - 2.0 * kk);
            }
        }
    }

    std::vector<double> series_at(double xi) const {
        std::vector<double> out(static_cast<std::size_t>(M_ + 1), 0.0);
        for (int n = 0; n <= M_; ++n) {
            const auto& a = series_[static_cast<std::size_t>(n)];
            double acc = 0.0;
            for (std::size_t k = kTerms; k-- > 0;) acc = acc * xi + a[k];
            out[static_cast<std::size_t>(n)] = acc;
        }
        return out;
    }

    static constexpr std::size_t kTerms = 160;

    int M_;
    double gamma_;
    double kappa_;
    std::vector<Rec3Coeffs> coeffs_;
    std::vector<double> lower_;  // A_{1-n}
    std::vector<std::vector<double>> series_;
};

struct OdeLambdaResult {
    double lambda = 0.0;
    double fit_residual = 0.0;  // RMS residual of the log-log fit
    double xi_end = 0.0;
    std::vector<double> initial_values;
    std::size_t fit_points = 0;
};

/// Slope of log f_0 against -log(1 - xi) over the last decade before xi = 1 - delta.
inline OdeLambdaResult ode_lambda(int M, double g, double kappa, double delta = 1e-6) {
    if (!(delta > 0 && delta < 1e-2)) throw ValidationError("delta must lie in (0, 1e-2)");
    const TruncatedSystem system(M, g, kappa);
    constexpr int kFitPoints = 41;
    const double s_end = -std::log(delta);
    const double s_begin = s_end - std::log(10.0);
    std::vector<double> xis, ss;
    for (int k = 0; k < kFitPoints; ++k) {
        const double s = s_begin + (s_end - s_begin) * k / (kFitPoints - 1);
        ss.push_back(s);
        xis.push_back(-std::expm1(-s));
    }
    const auto values = system.evaluate(xis);

    std::vector<double> ys;
    for (const auto& row : values) {
        if (!(row[0] > 0) || !std::isfinite(row[0])) throw NumericalError("f_0 is not positive near xi = 1");
        ys.push_back(std::log(row[0]));
    }
    const double n = static_cast<double>(ss.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < ss.size(); ++k) {
        mx += ss[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < ss.size(); ++k) {
        sxx += (ss[k] - mx) * (ss[k] - mx);
        sxy += (ss[k] - mx) * (ys[k] - my);
    }
    OdeLambdaResult out;
    out.lambda = sxy / sxx;
    double rss = 0;
    for (std::size_t k = 0; k < ss.size(); ++k) {
        const double r = ys[k] - (my + out.lambda * (ss[k] - mx));
        rss += r * r;
    }
    out.fit_residual = std::sqrt(rss / n);
    out.xi_end = 1.0 - delta;
    out.initial_values = system.initial_values();
    out.fit_points = ss.size();
    if (out.fit_residual > 1e-3) throw NumericalError("ode_lambda fit residual exceeds 1e-3");
    return out;
}

// theta functions of the two exactly solved q = 2 cases, with derivatives.
struct ThetaValues {
    double theta0, dtheta0, theta1, dtheta1;
};

inline ThetaValues q2_thetas(int which, double xi) {
    const double u = 1.0 - xi;
    if (which == 1) {
        const double t0 = 1.0 / (u * u * u);
        return {t0, 3.0 * t0 / u, 0.0, 0.0};
    }
    if (which == 2) {
        const double u4 = u * u * u * u;
        return {(1.0 + xi) / u4, (5.0 + 3.0 * xi) / (u4 * u), -1.0 / u4, -4.0 / (u4 * u)};
    }
    throw ValidationError("q = 2 case must be 1 or 2");
}

struct TheoremCheck {
    std::string name;
    bool passed;
    std::string detail;
};

struct Q2TheoremReport {
    int which = 0;
    std::vector<TheoremCheck> checks;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const TheoremCheck& c) { return c.passed; });
    }
};

/// Checks the interior q = 2 theorem: the closed-form thetas solve their ODEs,
/// the exact recurrence grid has rho_ii = i^2 (eta_1 = 3) or i^3 (eta_1 = 1),
/// and the thetas have the required values at xi = 0.
inline Q2TheoremReport verify_q2_theorem(int which) {
    if (which != 1 && which != 2) throw ValidationError("q = 2 case must be 1 or 2");
    Q2TheoremReport report;
    report.which = which;

    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double xi = 0.99 * k / 99.0;
        const auto th = q2_thetas(which, xi);
        double r0, s0, r1 = 0.0, s1 = 1.0;
        if (which == 1) {
            r0 = (xi - 1.0) * th.dtheta0 + 3.0 * th.theta0;
            s0 = std::abs((xi - 1.0) * th.dtheta0) + std::abs(3.0 * th.theta0);
        } else {
            r0 = (xi - 1.0) * th.dtheta0 + 3.0 * th.theta0 - 2.0 * th.theta1;
            s0 = std::abs((xi - 1.0) * th.dtheta0) + std::abs(3.0 * th.theta0) + std::abs(2.0 * th.theta1);
            r1 = xi * (xi - 1.0) * th.dtheta1 + (3.0 * xi - 1.0) * th.theta1 - th.theta0;
            s1 = std::abs(xi * (xi - 1.0) * th.dtheta1) + std::abs((3.0 * xi - 1.0) * th.theta1) + std::abs(th.theta0);
        }
        worst = std::max({worst, std::abs(r0) / s0, std::abs(r1) / s1});
    }
    report.checks.push_back({"theta ODE residual < 1e-12 on [0, 0.99]", worst < 1e-12,
                             "max relative residual " + format_double(worst)});

    const Rational q(2);
    const auto eta = EtaProfile<Rational>::from_descriptor(LevyDescriptor::brownian(which == 1 ? 6 : 2));
    const auto grid = build_grid(Version::interior, eta, q, 32);
    int first_bad = 0;
    for (int i = 1; i <= 32 && first_bad == 0; ++i) {
        const Rational expected = which == 1 ? Rational(i * i) : Rational(i * i * i);
        if (grid.at(i, i) != expected) first_bad = i;
    }
    report.checks.push_back({std::string("exact grid diagonal rho_ii = ") + (which == 1 ? "i^2" : "i^3") + " for i <= 32",
                             first_bad == 0,
                             first_bad == 0 ? "all 32 entries match"
                                            : "mismatch at i = " + std::to_string(first_bad) + ": " +
                                                  to_string(grid.at(first_bad, first_bad))});

    const auto at0 = q2_thetas(which, 0.0);
    report.checks.push_back({"theta_0(0) = 1", at0.theta0 == 1.0, "theta_0(0) = " + format_double(at0.theta0)});
    if (which == 2) {
        report.checks.push_back({"theta_1 finite at 0", std::isfinite(at0.theta1),
                                 "theta_1(0) = " + format_double(at0.theta1)});
    }
    return report;
}

inline void write_spectrum_csv_header(std::ostream& out) { out << "q,kappa,beta,branch\n"; }

inline void write_spectrum_row(std::ostream& out, const SpectrumPoint& p) {
    out << format_double(p.q) << ',' << format_double(p.kappa) << ',' << format_double(p.beta) << ','
        << to_string(p.branch) << '\n';
}

}  // namespace lle
