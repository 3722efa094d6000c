#pragma once

// Elementary slit (spike) maps, their compositions into discrete Loewner
// chains, whole-plane approximations and Monte-Carlo derivative moments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <span>
#include <thread>
#include <vector>

#include "lle/errors.hpp"
#include "lle/format.hpp"
#include "lle/levy_driver.hpp"

namespace lle {

using Complex = std::complex<double>;

struct ComplexSample {
    Complex value;
    Complex derivative;
};

enum class Version { interior, exterior };

inline const char* to_string(Version v) { return v == Version::interior ? "interior" : "exterior"; }

inline Version parse_version(std::string_view s) {
    if (s == "interior") return Version::interior;
    if (s == "exterior") return Version::exterior;
    throw ValidationError("version must be 'interior' or 'exterior', got '" + std::string(s) + "'");
}

/// Radicand magnitude below which the spike map is treated as singular.
inline constexpr double kBranchTolerance = 1e-14;

/// h(w, t) = e^t (w+1) (w+1+sqrt((w+1)^2 - 4 e^{-t} w)) / (2w) - 1 and dh/dw.
///
/// The square root is the branch analytic on |w| > 1 with sqrt ~ w+1 at
/// infinity, written as w * sqrt(1 - r+/w) * sqrt(1 - r-/w) where r+- are the
/// branch points e^{+-i theta}, cos theta = 2e^{-t} - 1, which bound the arc
/// around w = 1 that opens into the slit. Both factors have nonnegative real
/// part on |w| >= 1, so principal roots are continuous there.
inline ComplexSample spike_map(Complex w, double t) {
    if (!(t >= 0) || !std::isfinite(t)) throw ValidationError("spike duration must be finite and >= 0");
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw ValidationError("non-finite map argument");
    if (std::abs(w) < 1.0 - 1e-12) throw ValidationError("spike map evaluated inside the unit disc");
    if (t == 0) return {w, Complex(1.0, 0.0)};

    const double decay = std::exp(-t);
    const double one_minus_cos = -2.0 * std::expm1(-t);                // 1 - cos(theta)
    const double sin_theta = 2.0 * std::sqrt(decay * -std::expm1(-t));  // sin(theta) >= 0

    // w - r+- computed around w = 1 to keep precision for short spikes.
    const Complex shifted = (w - 1.0) + one_minus_cos;
    const Complex to_upper = shifted - Complex(0.0, sin_theta);
    const Complex to_lower = shifted + Complex(0.0, sin_theta);
    const double scale = std::max(1.0, std::abs(w));
    if (std::abs(to_upper) < kBranchTolerance * scale || std::abs(to_lower) < kBranchTolerance * scale) {
        throw SingularityError("spike map evaluated at a branch point of the slit base");
    }
    const Complex root = w * std::sqrt(to_upper / w) * std::sqrt(to_lower / w);
    const Complex root_prime = (w + 1.0 - 2.0 * decay) / root;

    const double growth = std::exp(t);
    const Complex wp1 = w + 1.0;
    const Complex p = wp1 * (wp1 + root);
    const Complex p_prime = (wp1 + root) + wp1 * (1.0 + root_prime);
    return {growth * p / (2.0 * w) - 1.0, growth * (p_prime * w - p) / (2.0 * w * w)};
}

struct SpikeEvent {
    double angle;
    double duration;
};

/// Ordered spike events; the empty chain is the identity map.
class MapChain {
public:
    MapChain() = default;

    explicit MapChain(std::vector<SpikeEvent> events) {
        events_.reserve(events.size());
        for (const auto& e : events) push_back(e);
    }

    static MapChain from_path(const DriverPath& path) {
        MapChain chain;
        chain.events_.reserve(path.segments.size());
        for (const auto& s : path.segments) chain.push_back({s.level, s.duration});
        return chain;
    }

    void push_back(SpikeEvent e) {
        if (!(e.duration > 0) || !std::isfinite(e.duration)) throw ValidationError("spike duration must be > 0");
        if (!std::isfinite(e.angle)) throw ValidationError("spike angle must be finite");
        events_.push_back(e);
        total_time_ += e.duration;
    }

    std::span<const SpikeEvent> events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    double total_time() const noexcept { return total_time_; }

private:
    std::vector<SpikeEvent> events_;
    double total_time_ = 0.0;
};

namespace detail {

inline ComplexSample compose(std::span<const SpikeEvent> events, Complex w) {
    Complex z = w;
    Complex derivative(1.0, 0.0);
    for (std::size_t k = events.size(); k-- > 0;) {
        const Complex rotation = std::polar(1.0, events[k].angle);
        ComplexSample s;
        try {
            s = spike_map(z / rotation, events[k].duration);
        } catch (const SingularityError& e) {
            throw SingularityError(e.what(), k);
        }
        z = rotation * s.value;
        derivative *= s.derivative;
    }
    return {z, derivative};
}

}  // namespace detail

/// F_n(w) = f_1(f_2(...f_n(w))) or, tip-centered, F_n(e^{i phi_n} w), with
/// the derivative accumulated by the chain rule.
inline ComplexSample chain_eval(const MapChain& chain, Complex w, bool tip_centered = false) {
    const auto events = chain.events();
    if (!tip_centered || events.empty()) return detail::compose(events, w);

    // F~_k(w) = F~_{k-1}(e^{i(phi_k - phi_{k-1})} h(w, dt_k)), phi_0 = L(0) = 0.
    Complex z = w;
    Complex derivative(1.0, 0.0);
    for (std::size_t k = events.size(); k-- > 0;) {
        const double previous = k == 0 ? 0.0 : events[k - 1].angle;
        const Complex rotation = std::polar(1.0, events[k].angle - previous);
        ComplexSample s;
        try {
            s = spike_map(z, events[k].duration);
        } catch (const SingularityError& e) {
            throw SingularityError(e.what(), k);
        }
        z = rotation * s.value;
        derivative *= rotation * s.derivative;
    }
    return {z, derivative};
}

/// Finite-horizon whole-plane map. Exterior: e^{-T} F(w, T) for |w| > 1.
/// Interior: 1 / (e^{-T} F(1/w, T)) for 0 < |w| < 1.
inline ComplexSample whole_plane_map(const MapChain& chain, Complex w, Version version,
                                     bool tip_centered = false) {
    const double shrink = std::exp(-chain.total_time());
    if (version == Version::exterior) {
        if (!(std::abs(w) > 1.0)) throw ValidationError("exterior whole-plane map needs |w| > 1");
        auto s = chain_eval(chain, w, tip_centered);
        return {shrink * s.value, shrink * s.derivative};
    }
    const double r = std::abs(w);
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("interior whole-plane map needs 0 < |w| < 1");
    const Complex v = 1.0 / w;
    auto s = chain_eval(chain, v, tip_centered);
    const Complex outer = shrink * s.value;
    if (outer == Complex(0.0, 0.0)) throw SingularityError("inversion pole in interior whole-plane map");
    const Complex inverse = 1.0 / outer;
    return {inverse, shrink * s.derivative * inverse * inverse / (w * w)};
}

/// Images of the growing tip: for each event and each of `samples_per_event`
/// equally spaced partial durations, the prefix chain applied to the
/// partially grown spike's tip e^{i phi_k} h(1, tau).
inline std::vector<Complex> trace_hull(const MapChain& chain, int samples_per_event) {
    if (samples_per_event < 1) throw ValidationError("samples_per_event must be >= 1");
    const auto events = chain.events();
    std::vector<Complex> points;
    points.reserve(events.size() * static_cast<std::size_t>(samples_per_event));
    for (std::size_t k = 0; k < events.size(); ++k) {
        const Complex rotation = std::polar(1.0, events[k].angle);
        for (int j = 1; j <= samples_per_event; ++j) {
            const double tau = events[k].duration * static_cast<double>(j) / samples_per_event;
            const Complex tip = rotation * spike_map(Complex(1.0, 0.0), tau).value;
            points.push_back(detail::compose(events.first(k), tip).value);
        }
    }
    return points;
}

inline void write_hull_csv(std::ostream& out, std::span<const Complex> points) {
    out << "re,im\n";
    for (const auto& p : points) out << format_double(p.real()) << ',' << format_double(p.imag()) << '\n';
}

/// Pairwise (cascade) summation over a fixed tree; the result depends only on
/// the order of `values`.
inline double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct MomentQuery {
    double q = 2.0;
    Complex w{0.5, 0.0};
    Version version = Version::interior;
    double horizon = 8.0;
    double max_step = 1e-3;
    std::size_t n_samples = 10000;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Monte-Carlo estimate of <|F~'(w)|^q> for the tip-centered, scaling-normalized
/// whole-plane map on [0, horizon]. Path i uses stream i of the seed, and the
/// reduction runs over a fixed tree, so the result is independent of `threads`.
inline MomentEstimate estimate_moment(const LevyDescriptor& d, const MomentQuery& query) {
    if (query.n_samples < 2) throw ValidationError("n_samples must be >= 2");
    if (!std::isfinite(query.q)) throw ValidationError("q must be finite");
    const double r = std::abs(query.w);
    if (query.version == Version::interior && !(r > 0 && r < 1)) {
        throw ValidationError("interior moment needs 0 < |w| < 1");
    }
    if (query.version == Version::exterior && !(r > 1)) throw ValidationError("exterior moment needs |w| > 1");
    if (!std::isfinite(query.horizon) || query.horizon <= 0) throw ValidationError("horizon must be > 0");
    if (!std::isfinite(query.max_step) || query.max_step <= 0) throw ValidationError("max_step must be > 0");

    if (query.q == 0.0) return {1.0, 0.0, query.n_samples, 0};

    const std::size_t n = query.n_samples;
    std::vector<double> values(n, 0.0);
    std::vector<unsigned char> ok(n, 0);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto path = sample_path(d, query.horizon, query.max_step, query.seed, i);
            const auto chain = MapChain::from_path(path);
            try {
                const auto s = whole_plane_map(chain, query.w, query.version, true);
                const double v = std::pow(std::abs(s.derivative), query.q);
                if (std::isfinite(v)) {
                    values[i] = v;
                    ok[i] = 1;
                }
            } catch (const SingularityError&) {
            }
        }
    };

    unsigned workers = query.threads ? query.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
    }

    std::vector<double> accepted;
    accepted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (ok[i]) accepted.push_back(values[i]);
    }
    MomentEstimate est;
    est.accepted = accepted.size();
    est.rejected = n - accepted.size();
    if (est.rejected * 100 > n) {
        throw NumericalError("rejection overflow: " + std::to_string(est.rejected) + " of " + std::to_string(n) +
                             " paths hit a singular evaluation");
    }
    const double count = static_cast<double>(accepted.size());
    est.mean = pairwise_sum(accepted) / count;
    for (auto& v : accepted) v = (v - est.mean) * (v - est.mean);
    const double variance = pairwise_sum(accepted) / (count - 1.0);
    est.std_error = std::sqrt(variance / count);
    return est;
}

}  // namespace lle
