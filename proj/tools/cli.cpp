#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lle/lle.hpp"

namespace lle::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "lle 0.1.0";

// Where an artifact goes: a file when a path is given, the fallback stream otherwise.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : path_(path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ValidationError("cannot open output file '" + path + "'");
        }
        stream_ = file_ ? file_.get() : &fallback;
    }
    std::ostream& stream() { return *stream_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

struct Invocation {
    std::string command;
    std::string out_path;
    std::string manifest_path;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::string> artifacts;
    std::vector<std::string> warnings;
    json config = json::object();
};

std::vector<double> parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ValidationError("range must be lo:hi:n, got '" + text + "'");
    try {
        const double lo = std::stod(parts[0]);
        const double hi = std::stod(parts[1]);
        const long n = std::stol(parts[2]);
        if (n < 1) throw ValidationError("range count must be >= 1");
        if (n == 1) return {lo};
        return linspace(lo, hi, static_cast<std::size_t>(n));
    } catch (const std::logic_error&) {
        throw ValidationError("range must be lo:hi:n, got '" + text + "'");
    }
}

std::vector<double> values_or_range(const std::vector<double>& values, const std::string& range, const char* flag) {
    if (!range.empty()) return parse_range(range);
    if (values.empty()) throw ValidationError(std::string("missing ") + flag);
    return values;
}

template <class S>
EtaProfile<S> make_profile(const std::string& descriptor, const std::vector<std::string>& list) {
    if (!list.empty()) {
        if (!descriptor.empty()) throw ValidationError("--eta and --eta-list are mutually exclusive");
        std::vector<Rational> values;
        std::string label = "list:[";
        for (std::size_t k = 0; k < list.size(); ++k) {
            values.push_back(parse_rational(list[k]));
            if (sgn(values.back()) < 0) throw ValidationError("--eta-list entries must be >= 0");
            label += (k ? ";" : "") + to_string(values.back());
        }
        label += "]";
        return EtaProfile<S>(
            [values](long m) {
                const auto idx = std::min<std::size_t>(static_cast<std::size_t>(m), values.size()) - 1;
                return from_rational<S>(values[idx]);
            },
            label);
    }
    if (descriptor.empty()) throw ValidationError("missing --eta (or --eta-list)");
    return EtaProfile<S>::from_descriptor(parse_descriptor(descriptor));
}

void write_manifest(const Invocation& inv, double millis) {
    if (inv.manifest_path.empty()) return;
    json manifest;
    manifest["command"] = inv.command;
    manifest["config"] = inv.config;
    manifest["seed"] = inv.seed;
    manifest["durations_ms"] = {{"total", millis}};
    manifest["artifact_paths"] = inv.artifacts;
    manifest["warnings"] = inv.warnings;
    manifest["versions"] = {{"tool", kToolVersion}, {"gmp", gmp_version}};
    std::ofstream file(inv.manifest_path, std::ios::binary);
    if (!file) throw ValidationError("cannot open manifest file '" + inv.manifest_path + "'");
    file << manifest.dump(2) << '\n';
}

json echo_options(const CLI::App& sub) {
    json config = json::object();
    for (const auto* opt : sub.get_options()) {
        if (opt->get_name() == "--help" || opt->count() == 0) continue;
        const auto& results = opt->results();
        std::string name = opt->get_name();
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        if (results.size() == 1) {
            config[name] = results.front();
        } else {
            config[name] = results;
        }
    }
    return config;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Integral-means spectra and derivative moments of whole-plane Levy-Loewner evolutions", "lle"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value config file; command-line flags take precedence");

    Invocation inv;
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--out,-o", inv.out_path, "Artifact path (stdout when omitted)");
        sub->add_option("--manifest", inv.manifest_path, "Run manifest path (default <out>.manifest.json)");
    };

    // eta
    std::string eta_desc;
    std::vector<std::string> eta_list;
    long m_max = 8;
    auto* eta_cmd = app.add_subcommand("eta", "Characteristic exponents eta_m of a process");
    eta_cmd->add_option("--eta", eta_desc, "Process descriptor, e.g. brownian:6, uniform:3, mix(brownian:2,uniform:1)")
        ->required();
    eta_cmd->add_option("--m-max", m_max, "Largest |m|")->check(CLI::NonNegativeNumber);
    add_output(eta_cmd);

    // simulate
    std::string version_text = "interior";
    double q_real = 2.0, w_re = 0.5, w_im = 0.0, horizon = 8.0, max_step = 1e-3;
    std::size_t n_samples = 10000;
    unsigned threads = 0;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimate of <|F'(w)|^q>");
    sim_cmd->add_option("--eta", eta_desc, "Process descriptor")->required();
    sim_cmd->add_option("--version", version_text, "interior | exterior");
    sim_cmd->add_option("--q", q_real, "Moment order q");
    sim_cmd->add_option("--w-re", w_re, "Re w");
    sim_cmd->add_option("--w-im", w_im, "Im w");
    sim_cmd->add_option("--T", horizon, "Whole-plane truncation horizon");
    sim_cmd->add_option("--max-step", max_step, "Largest Brownian time step");
    sim_cmd->add_option("--n-samples", n_samples, "Number of sampled paths");
    sim_cmd->add_option("--seed", inv.seed, "Master seed");
    sim_cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
    add_output(sim_cmd);

    // grid / beta-est
    std::string q_text = "2";
    int grid_n = 32;
    bool exact = false, floating = false;
    auto add_grid_options = [&](CLI::App* sub) {
        sub->add_option("--version", version_text, "interior | exterior");
        sub->add_option("--q", q_text, "Moment order q (exact decimal or p/q)");
        sub->add_option("--eta", eta_desc, "Process descriptor");
        sub->add_option("--eta-list", eta_list, "eta_1,eta_2,... (last value repeats)")->delimiter(',');
        sub->add_option("--n", grid_n, "Grid size N")->check(CLI::PositiveNumber);
        auto* ex = sub->add_flag("--exact", exact, "Exact rational arithmetic (default)");
        auto* fl = sub->add_flag("--float", floating, "Floating-point arithmetic");
        ex->excludes(fl);
        add_output(sub);
    };
    auto* grid_cmd = app.add_subcommand("grid", "Coefficient grid rho_ij of the moment expansion");
    add_grid_options(grid_cmd);
    auto* best_cmd = app.add_subcommand("beta-est", "Diagonal-growth estimate of beta from a coefficient grid");
    add_grid_options(best_cmd);

    // spectrum
    std::vector<double> kappas, qs;
    std::string q_range;
    auto* spec_cmd = app.add_subcommand("spectrum", "Closed-form beta(q) of whole-plane SLE");
    spec_cmd->add_option("--version", version_text, "interior | exterior");
    spec_cmd->add_option("--kappa", kappas, "kappa values")->delimiter(',')->required();
    spec_cmd->add_option("--q", qs, "q values")->delimiter(',');
    spec_cmd->add_option("--q-range", q_range, "lo:hi:n");
    add_output(spec_cmd);

    // truncation / frobenius / ode-lambda
    int order_m = 0;
    std::vector<double> gammas;
    std::string gamma_range;
    double gamma_value = 1.0, delta = 1e-6;
    std::optional<double> kappa_override;
    auto* trunc_cmd = app.add_subcommand("truncation", "Points on truncation curves with both blow-up rates");
    trunc_cmd->add_option("--version", version_text, "interior | exterior");
    trunc_cmd->add_option("--M", order_m, "Truncation order")->check(CLI::NonNegativeNumber);
    trunc_cmd->add_option("--gamma", gammas, "gamma values")->delimiter(',');
    trunc_cmd->add_option("--gamma-range", gamma_range, "lo:hi:n");
    trunc_cmd->add_option("--delta", delta, "ODE stopping distance from xi = 1");
    add_output(trunc_cmd);

    auto* frob_cmd = app.add_subcommand("frobenius", "Tridiagonal eigenvalue route to the blow-up rate");
    frob_cmd->add_option("--M", order_m, "Truncation order")->check(CLI::NonNegativeNumber);
    frob_cmd->add_option("--gamma", gamma_value, "gamma");
    frob_cmd->add_option("--kappa", kappa_override, "kappa (default: from the interior truncation curve)");
    add_output(frob_cmd);

    auto* ode_cmd = app.add_subcommand("ode-lambda", "ODE integration route to the blow-up rate");
    ode_cmd->add_option("--M", order_m, "Truncation order")->check(CLI::NonNegativeNumber);
    ode_cmd->add_option("--gamma", gamma_value, "gamma");
    ode_cmd->add_option("--delta", delta, "Stopping distance from xi = 1");
    add_output(ode_cmd);

    // legendre
    std::string transform, in_path, grid_range;
    auto* leg_cmd = app.add_subcommand("legendre", "Legendre transforms among beta, f, tau and D");
    leg_cmd->add_option("--transform", transform, "f-from-beta | beta-from-f | beta-from-omega | tau | dimensions | positive")
        ->required()
        ->check(CLI::IsMember({"f-from-beta", "beta-from-f", "beta-from-omega", "tau", "dimensions", "positive"}));
    leg_cmd->add_option("--in", in_path, "Input CSV x,y,flag")->required()->check(CLI::ExistingFile);
    leg_cmd->add_option("--grid", grid_range, "Output abscissae lo:hi:n");
    add_output(leg_cmd);

    // trace
    int samples_per_event = 1;
    std::string path_out;
    auto* trace_cmd = app.add_subcommand("trace", "Tip trajectory of one sampled evolution");
    trace_cmd->add_option("--eta", eta_desc, "Process descriptor")->required();
    trace_cmd->add_option("--T", horizon, "Evolution time");
    trace_cmd->add_option("--max-step", max_step, "Largest Brownian time step");
    trace_cmd->add_option("--seed", inv.seed, "Master seed");
    trace_cmd->add_option("--samples-per-event", samples_per_event, "Points per spike")->check(CLI::PositiveNumber);
    trace_cmd->add_option("--path-out", path_out, "Also write the driver as CSV duration,level");
    add_output(trace_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Check both exactly solvable q = 2 cases");
    add_output(verify_cmd);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    CLI::App* sub = app.get_subcommands().front();
    inv.command = sub->get_name();
    inv.config = echo_options(*sub);
    if (inv.manifest_path.empty() && !inv.out_path.empty()) inv.manifest_path = inv.out_path + ".manifest.json";

    const auto start = std::chrono::steady_clock::now();
    try {
        Sink sink(inv.out_path, out);
        if (!inv.out_path.empty()) inv.artifacts.push_back(inv.out_path);
        std::ostream& os = sink.stream();
        const Version version = parse_version(version_text);

        if (sub == eta_cmd) {
            const auto d = parse_descriptor(eta_desc);
            os << "m,eta\n";
            for (long m = -m_max; m <= m_max; ++m) os << m << ',' << to_string(characteristic_exponent<Rational>(d, m)) << '\n';

        } else if (sub == sim_cmd) {
            const auto d = parse_descriptor(eta_desc);
            MomentQuery query;
            query.q = q_real;
            query.w = Complex(w_re, w_im);
            query.version = version;
            query.horizon = horizon;
            query.max_step = max_step;
            query.n_samples = n_samples;
            query.seed = inv.seed;
            query.threads = threads;
            const auto est = estimate_moment(d, query);
            json record;
            record["q"] = q_real;
            record["w"] = {w_re, w_im};
            record["version"] = to_string(version);
            record["T"] = horizon;
            record["max_step"] = max_step;
            record["n_samples"] = n_samples;
            record["seed"] = inv.seed;
            record["mean"] = est.mean;
            record["std_error"] = est.std_error;
            record["rejected"] = est.rejected;
            if (est.rejected > 0) inv.warnings.push_back(std::to_string(est.rejected) + " paths rejected");
            os << record.dump(2) << '\n';

        } else if (sub == grid_cmd || sub == best_cmd) {
            json meta;
            auto emit = [&](const auto& grid) {
                meta["version"] = to_string(grid.version());
                meta["q"] = q_text;
                meta["eta"] = grid.eta_label();
                meta["N"] = grid.size();
                meta["scalar_kind"] = floating ? "float" : "exact";
                if (sub == grid_cmd) {
                    write_grid_csv(os, grid);
                } else {
                    const auto est = diagonal_beta_estimate(grid);
                    json r = meta;
                    r["beta"] = est.beta;
                    r["degenerate"] = est.degenerate;
                    r["slope"] = est.slope;
                    r["fit_residual"] = est.fit_residual;
                    r["sign_changes"] = est.sign_changes;
                    r["window"] = {est.window_first, est.window_last};
                    r["points"] = est.points;
                    r["note"] = "finite-N slope; cannot distinguish limsup from lim";
                    os << r.dump(2) << '\n';
                }
            };
            if (floating) {
                emit(build_grid(version, make_profile<double>(eta_desc, eta_list), parse_rational(q_text).get_d(), grid_n));
            } else {
                emit(build_grid(version, make_profile<Rational>(eta_desc, eta_list), parse_rational(q_text), grid_n));
            }
            inv.config["grid_metadata"] = meta;

        } else if (sub == spec_cmd) {
            const auto q_values = values_or_range(qs, q_range, "--q or --q-range");
            write_spectrum_csv_header(os);
            for (double kappa : kappas) {
                for (double q : q_values) write_spectrum_row(os, beta_closed_form(version, q, kappa));
            }

        } else if (sub == trunc_cmd) {
            const auto g_values = values_or_range(gammas, gamma_range, "--gamma or --gamma-range");
            os << "M,gamma,kappa,q,lambda_frobenius,lambda_ode,beta_closed_form\n";
            for (double g : g_values) {
                const auto p = truncation_curve(version, order_m, g);
                const auto beta = beta_closed_form(version, p.q, p.kappa).beta;
                std::string frob, ode;
                if (version == Version::interior) {
                    frob = format_double(frobenius_lambda(order_m, g, p.kappa).lambda_max);
                    ode = format_double(ode_lambda(order_m, g, p.kappa, delta).lambda);
                    if (p.q < critical_q(Version::interior, p.kappa)) {
                        inv.warnings.push_back("gamma " + format_double(g) +
                                               ": q < Q(kappa), lambda and beta reported side by side only");
                    }
                }
                os << order_m << ',' << format_double(g) << ',' << format_double(p.kappa) << ',' << format_double(p.q)
                   << ',' << frob << ',' << ode << ',' << format_double(beta) << '\n';
            }

        } else if (sub == frob_cmd) {
            double kappa;
            json r;
            if (kappa_override) {
                kappa = *kappa_override;
            } else {
                const auto p = truncation_curve(Version::interior, order_m, gamma_value);
                kappa = p.kappa;
                r["q"] = p.q;
            }
            const auto res = frobenius_lambda(order_m, gamma_value, kappa);
            r["M"] = order_m;
            r["gamma"] = gamma_value;
            r["kappa"] = kappa;
            r["lambda_max"] = res.lambda_max;
            r["eigenvector"] = res.eigenvector;
            json evs = json::array();
            for (const auto& ev : res.eigenvalues) evs.push_back({ev.real(), ev.imag()});
            r["eigenvalues"] = evs;
            const Eigen::MatrixXd t = res.system.dense();
            json rows = json::array();
            for (Eigen::Index i = 0; i < t.rows(); ++i) {
                std::vector<double> row(static_cast<std::size_t>(t.cols()));
                for (Eigen::Index j = 0; j < t.cols(); ++j) row[static_cast<std::size_t>(j)] = t(i, j);
                rows.push_back(row);
            }
            r["matrix"] = rows;
            os << r.dump(2) << '\n';

        } else if (sub == ode_cmd) {
            const auto p = truncation_curve(Version::interior, order_m, gamma_value);
            const auto res = ode_lambda(order_m, gamma_value, p.kappa, delta);
            json r;
            r["M"] = order_m;
            r["gamma"] = gamma_value;
            r["kappa"] = p.kappa;
            r["q"] = p.q;
            r["lambda"] = res.lambda;
            r["fit_residual"] = res.fit_residual;
            r["xi_end"] = res.xi_end;
            r["fit_points"] = res.fit_points;
            r["initial_values"] = res.initial_values;
            os << r.dump(2) << '\n';

        } else if (sub == leg_cmd) {
            std::ifstream in(in_path);
            const bool from_beta = transform == "f-from-beta";
            const auto input = read_spectrum_grid_csv(in, from_beta ? SpectrumLabel::beta : SpectrumLabel::f);
            std::vector<double> grid;
            if (transform != "positive") {
                if (grid_range.empty()) throw ValidationError("--grid is required for this transform");
                grid = parse_range(grid_range);
            }
            if (from_beta) {
                write_spectrum_grid_csv(os, f_from_beta(input, grid));
            } else if (transform == "beta-from-f") {
                write_spectrum_grid_csv(os, beta_from_f(input, grid));
            } else if (transform == "beta-from-omega") {
                write_spectrum_grid_csv(os, beta_from_omega(omega_from_f(input), grid));
            } else if (transform == "tau") {
                write_spectrum_grid_csv(os, tau_and_dimensions(input, grid).tau);
            } else if (transform == "dimensions") {
                write_spectrum_grid_csv(os, tau_and_dimensions(input, grid).dimensions);
            } else {
                const auto part = positive_truncation(input);
                write_spectrum_grid_csv(os, part.f);
                if (part.support) {
                    inv.config["support"] = {part.support->first, part.support->second};
                } else {
                    inv.warnings.push_back("empty support: f < 0 everywhere");
                }
            }

        } else if (sub == trace_cmd) {
            const auto d = parse_descriptor(eta_desc);
            const auto path = sample_path(d, horizon, max_step, inv.seed);
            if (!path_out.empty()) {
                std::ofstream file(path_out, std::ios::binary);
                if (!file) throw ValidationError("cannot open '" + path_out + "'");
                write_path_csv(file, path);
                inv.artifacts.push_back(path_out);
            }
            write_hull_csv(os, trace_hull(MapChain::from_path(path), samples_per_event));

        } else if (sub == verify_cmd) {
            bool all = true;
            for (int which : {1, 2}) {
                const auto report = verify_q2_theorem(which);
                os << "q = 2 theorem, case " << which << (which == 1 ? " (eta_1 = 3)" : " (eta_1 = 1)") << ": "
                   << (report.passed() ? "PASS" : "FAIL") << '\n';
                for (const auto& c : report.checks) {
                    os << "  [" << (c.passed ? "ok" : "FAILED") << "] " << c.name << " -- " << c.detail << '\n';
                }
                all = all && report.passed();
            }
            const double b3 = beta_closed_form(Version::interior, 2.0, 6.0).beta;
            const double b4 = beta_closed_form(Version::interior, 2.0, 2.0).beta;
            const bool spectrum_ok = b3 == 3.0 && b4 == 4.0;
            os << "closed-form spectrum beta(2; kappa=6) = " << format_double(b3) << ", beta(2; kappa=2) = "
               << format_double(b4) << ": " << (spectrum_ok ? "PASS" : "FAIL") << '\n';
            all = all && spectrum_ok;
            if (!all) {
                write_manifest(inv, 0.0);
                return kExitNumerical;
            }
        }
        os.flush();
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }

    const double millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    try {
        write_manifest(inv, millis);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    }
    for (const auto& w : inv.warnings) err << "warning: " << w << '\n';
    return kExitOk;
}

}  // namespace lle::cli
