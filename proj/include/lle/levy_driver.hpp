#pragma once

// Driftless symmetric Levy processes on the unit circle: characteristic
// exponents and exact/discretized sampling of piecewise-constant drivers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lle/errors.hpp"
#include "lle/format.hpp"
#include "lle/rational.hpp"
#include "lle/rng.hpp"

namespace lle {

class LevyDescriptor;

/// Brownian motion with <(B(t+s)-B(t))^2> = kappa |s|.
struct Brownian {
    Rational kappa;
};

/// Compound Poisson process whose jumps are uniform on the circle.
struct UniformJump {
    Rational rate;
};

/// Compound Poisson process with a symmetric jump law given by its cosine
/// moments j_m = <cos(m J)>, m >= 1. Moments past the table are zero.
struct TabulatedJump {
    Rational rate;
    std::vector<Rational> jump_fourier;
    std::size_t grid_cells = 4096;
};

/// Sum of independent components.
struct Mixture {
    std::vector<LevyDescriptor> components;
};

class LevyDescriptor {
public:
    using Variant = std::variant<Brownian, UniformJump, TabulatedJump, Mixture>;

    static LevyDescriptor brownian(Rational kappa) {
        if (sgn(kappa) < 0) throw ValidationError("brownian kappa must be >= 0");
        return LevyDescriptor(Brownian{std::move(kappa)});
    }

    static LevyDescriptor uniform(Rational rate) {
        if (sgn(rate) <= 0) throw ValidationError("uniform jump rate must be > 0");
        return LevyDescriptor(UniformJump{std::move(rate)});
    }

    static LevyDescriptor tabulated(Rational rate, std::vector<Rational> jump_fourier,
                                    std::size_t grid_cells = 4096) {
        if (sgn(rate) <= 0) throw ValidationError("tabulated jump rate must be > 0");
        for (const auto& j : jump_fourier) {
            if (abs(j) > 1) throw ValidationError("tabulated jump moment outside [-1, 1]");
        }
        if (grid_cells < 2 || grid_cells % 2 != 0) {
            throw ValidationError("tabulated jump grid must have an even number of cells");
        }
        return LevyDescriptor(TabulatedJump{std::move(rate), std::move(jump_fourier), grid_cells});
    }

    static LevyDescriptor mixture(std::vector<LevyDescriptor> components) {
        if (components.empty()) throw ValidationError("mixture needs at least one component");
        return LevyDescriptor(Mixture{std::move(components)});
    }

    const Variant& variant() const noexcept { return v_; }

private:
    explicit LevyDescriptor(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    parts.push_back(trim(s.substr(start)));
    return parts;
}

}  // namespace detail

/// Parses `brownian:<kappa>`, `uniform:<rate>`, `tabulated:<rate>:[j1;j2;...]`
/// and `mix(<desc>,<desc>,...)`.
inline LevyDescriptor parse_descriptor(std::string_view text) {
    auto s = detail::trim(text);
    auto fail = [&] { return ValidationError("malformed process descriptor: '" + std::string(s) + "'"); };

    if (s.starts_with("mix(")) {
        if (!s.ends_with(")")) throw fail();
        auto inner = s.substr(4, s.size() - 5);
        std::vector<LevyDescriptor> parts;
        for (auto part : detail::split_top_level(inner, ',')) {
            if (part.empty()) throw fail();
            parts.push_back(parse_descriptor(part));
        }
        return LevyDescriptor::mixture(std::move(parts));
    }

    auto colon = s.find(':');
    if (colon == std::string_view::npos) throw fail();
    auto kind = s.substr(0, colon);
    auto rest = s.substr(colon + 1);

    if (kind == "brownian") return LevyDescriptor::brownian(parse_rational(rest));
    if (kind == "uniform") return LevyDescriptor::uniform(parse_rational(rest));
    if (kind == "tabulated") {
        auto second = rest.find(':');
        if (second == std::string_view::npos) throw fail();
        auto table = detail::trim(rest.substr(second + 1));
        if (table.size() < 2 || table.front() != '[' || table.back() != ']') throw fail();
        std::vector<Rational> moments;
        auto body = table.substr(1, table.size() - 2);
        if (!detail::trim(body).empty()) {
            for (auto item : detail::split_top_level(body, ';')) moments.push_back(parse_rational(item));
        }
        return LevyDescriptor::tabulated(parse_rational(rest.substr(0, second)), std::move(moments));
    }
    throw fail();
}

inline std::string to_string(const LevyDescriptor& d) {
    return std::visit(
        detail::overloaded{
            [](const Brownian& b) { return "brownian:" + to_string(b.kappa); },
            [](const UniformJump& u) { return "uniform:" + to_string(u.rate); },
            [](const TabulatedJump& t) {
                std::string out = "tabulated:" + to_string(t.rate) + ":[";
                for (std::size_t i = 0; i < t.jump_fourier.size(); ++i) {
                    if (i) out += ';';
                    out += to_string(t.jump_fourier[i]);
                }
                return out + "]";
            },
            [](const Mixture& m) {
                std::string out = "mix(";
                for (std::size_t i = 0; i < m.components.size(); ++i) {
                    if (i) out += ',';
                    out += to_string(m.components[i]);
                }
                return out + ")";
            }},
        d.variant());
}

/// eta_m with <exp(i m L(t))> = exp(-t eta_m). Exact in the rational tower.
template <class S = double>
S characteristic_exponent(const LevyDescriptor& d, long m) {
    if (m == 0) return from_int<S>(0);
    const long am = m < 0 ? -m : m;
    return std::visit(
        detail::overloaded{
            [&](const Brownian& b) -> S {
                return from_rational<S>(b.kappa * Rational(am) * Rational(am) / 2);
            },
            [&](const UniformJump& u) -> S { return from_rational<S>(u.rate); },
            [&](const TabulatedJump& t) -> S {
                Rational moment = static_cast<std::size_t>(am) <= t.jump_fourier.size()
                                      ? t.jump_fourier[static_cast<std::size_t>(am) - 1]
                                      : Rational(0);
                return from_rational<S>(t.rate * (1 - moment));
            },
            [&](const Mixture& mix) -> S {
                S total = from_int<S>(0);
                for (const auto& c : mix.components) total += characteristic_exponent<S>(c, am);
                return total;
            }},
        d.variant());
}

/// Piecewise-constant right-continuous driver starting at level 0.
struct DriverPath {
    struct Segment {
        double duration;
        double level;
    };

    std::vector<Segment> segments;
    double total_duration = 0.0;
    /// Level at t = total_duration, after the last increment.
    double end_level = 0.0;

    /// L(t) for 0 <= t <= total_duration.
    double level_at(double t) const {
        if (t >= total_duration) return end_level;
        double start = 0.0;
        for (const auto& s : segments) {
            if (t < start + s.duration) return s.level;
            start += s.duration;
        }
        return end_level;
    }
};

inline void write_path_csv(std::ostream& out, const DriverPath& path) {
    out << "duration,level\n";
    for (const auto& s : path.segments) out << format_double(s.duration) << ',' << format_double(s.level) << '\n';
}

namespace detail {

// Inverse-CDF sampler for a tabulated symmetric jump law on (-pi, pi].
class TabulatedJumpSampler {
public:
    explicit TabulatedJumpSampler(const TabulatedJump& t) : cells_(t.grid_cells) {
        const double pi = std::numbers::pi;
        const double width = 2.0 * pi / static_cast<double>(cells_);
        std::vector<double> moments;
        for (const auto& j : t.jump_fourier) moments.push_back(j.get_d());
        cdf_.assign(cells_ + 1, 0.0);
        for (std::size_t k = 0; k < cells_; ++k) {
            const double a = -pi + width * static_cast<double>(k);
            const double b = a + width;
            double mass = width / (2.0 * pi);
            for (std::size_t m = 1; m <= moments.size(); ++m) {
                const double md = static_cast<double>(m);
                mass += moments[m - 1] * (std::sin(md * b) - std::sin(md * a)) / (pi * md);
            }
            if (mass < -1e-12) {
                throw ValidationError("tabulated jump moments do not define a nonnegative density");
            }
            cdf_[k + 1] = cdf_[k] + std::max(mass, 0.0);
        }
        for (auto& c : cdf_) c /= cdf_.back();
        width_ = width;
    }

    double operator()(Engine& rng) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double u = unit(rng);
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t k = static_cast<std::size_t>(std::distance(cdf_.begin(), it));
        k = std::clamp<std::size_t>(k, 1, cells_) - 1;
        const double span = cdf_[k + 1] - cdf_[k];
        const double frac = span > 0 ? (u - cdf_[k]) / span : 0.5;
        return -std::numbers::pi + width_ * (static_cast<double>(k) + frac);
    }

private:
    std::size_t cells_;
    double width_ = 0.0;
    std::vector<double> cdf_;
};

struct JumpSource {
    double rate;
    std::variant<std::monostate, TabulatedJumpSampler> law;  // monostate: uniform

    double draw(Engine& rng) const {
        if (const auto* tab = std::get_if<TabulatedJumpSampler>(&law)) return (*tab)(rng);
        std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
        return angle(rng);
    }
};

struct FlatProcess {
    double kappa = 0.0;
    std::vector<JumpSource> jumps;
};

inline void flatten(const LevyDescriptor& d, FlatProcess& out) {
    std::visit(overloaded{[&](const Brownian& b) { out.kappa += b.kappa.get_d(); },
                          [&](const UniformJump& u) { out.jumps.push_back({u.rate.get_d(), {}}); },
                          [&](const TabulatedJump& t) {
                              out.jumps.push_back({t.rate.get_d(), TabulatedJumpSampler(t)});
                          },
                          [&](const Mixture& m) {
                              for (const auto& c : m.components) flatten(c, out);
                          }},
               d.variant());
}

}  // namespace detail

/// Samples one driver on [0, horizon]. Jumps arrive at exact exponential times;
/// the Brownian part is refined into steps no longer than max_step with Gaussian
/// increments of variance kappa * step. Stream `stream` of `seed` is used.
inline DriverPath sample_path(const LevyDescriptor& d, double horizon, double max_step,
                              std::uint64_t seed, std::uint64_t stream = 0) {
    if (!std::isfinite(horizon) || horizon <= 0) throw ValidationError("horizon must be finite and > 0");
    if (!std::isfinite(max_step) || max_step <= 0) throw ValidationError("max_step must be finite and > 0");

    detail::FlatProcess process;
    detail::flatten(d, process);
    Engine rng = make_stream(seed, stream);

    struct Jump {
        double time;
        double size;
    };
    std::vector<Jump> jumps;
    for (const auto& source : process.jumps) {
        std::exponential_distribution<double> wait(source.rate);
        for (double t = wait(rng); t < horizon; t += wait(rng)) jumps.push_back({t, source.draw(rng)});
    }
    std::stable_sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.time < b.time; });

    DriverPath path;
    path.total_duration = horizon;
    std::normal_distribution<double> gauss(0.0, 1.0);
    const bool diffusive = process.kappa > 0;
    double level = 0.0;
    double now = 0.0;

    auto advance_to = [&](double until) {
        const double gap = until - now;
        if (gap <= 0) return;
        const auto steps = diffusive ? static_cast<std::size_t>(std::ceil(gap / max_step)) : std::size_t{1};
        const double step = gap / static_cast<double>(steps);
        for (std::size_t k = 0; k < steps; ++k) {
            path.segments.push_back({step, level});
            if (diffusive) level += std::sqrt(process.kappa * step) * gauss(rng);
        }
        now = until;
    };

    for (const auto& jump : jumps) {
        advance_to(jump.time);
        level += jump.size;
    }
    advance_to(horizon);
    path.end_level = level;
    return path;
}

}  // namespace lle
