#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "twoseq/csv.hpp"
#include "twoseq/detection.hpp"
#include "twoseq/diagnostics.hpp"
#include "twoseq/error.hpp"
#include "twoseq/estimators.hpp"
#include "twoseq/harness.hpp"
#include "twoseq/plot.hpp"
#include "twoseq/rates.hpp"

namespace twoseq::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string describe(const RateResult& r) {
    return "r=" + num(r.exponent) + " logpow=" + std::to_string(r.log_power) +
           (r.divergent ? " divergent=true" : "");
}

/// Fill options of `cmd` that were not given on the command line from a flat
/// TOML/INI file (key = value per line, keys named like the long flags).
void apply_config(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    const auto items = CLI::ConfigTOML().from_config(in);
    for (const auto& item : items) {
        if (item.name == "config") continue;
        CLI::Option* opt = cmd.get_option_no_throw("--" + item.name);
        if (!opt) throw UsageError("unknown config key '" + item.name + "' in " + path);
        if (opt->count() == 0) {
            opt->add_result(item.inputs);
            opt->run_callback();
        }
    }
}

double parse_sigma(const std::string& text, const ObservationPair& obs, bool& estimated) {
    estimated = text == "auto";
    if (estimated) return mad_sigma(obs.x, obs.y);
    try {
        const double v = std::stod(text);
        if (v > 0.0) return v;
    } catch (const std::logic_error&) {
    }
    throw UsageError("--sigma expects 'auto' or a positive number");
}

// ----------------------------------------------------------------------------

struct RatesArgs {
    double beta = 0, epsilon = 0;
    std::string a, b;
    bool log_scale = false;
    bool one_seq = false;
};

SignalStrength strength_arg(const std::string& text, bool log_scale) {
    if (log_scale && text.rfind("log:", 0) != 0) return SignalStrength::parse("log:" + text);
    return SignalStrength::parse(text);
}

void cmd_rates(const RatesArgs& args, std::ostream& out) {
    const SignalStrength b = strength_arg(args.b, args.log_scale);
    if (args.one_seq) {
        out << "one-sequence " << describe(rate_one_seq(args.beta, b)) << '\n';
        return;
    }
    const Regime regime = regime_of(args.beta, args.epsilon);
    if (args.a.empty() && !b.is_log()) {
        const RateResult rate = rate_two_seq_equal(args.beta, args.epsilon, b.value);
        const OptimalChoice best = optimal_estimator(args.beta, args.epsilon, b, b);
        out << "regime=" << to_string(regime) << ' ' << describe(rate)
            << " estimator=" << to_string(best.kind) << '\n';
        return;
    }
    const SignalStrength a = args.a.empty() ? b : strength_arg(args.a, args.log_scale);
    const TableEntry entry = rate_two_seq_general(args.beta, args.epsilon, a, b);
    const OptimalChoice best = optimal_estimator(args.beta, args.epsilon, a, b);
    out << "regime=" << to_string(regime) << ' ' << describe(entry.rate)
        << " estimator=" << to_string(best.kind) << (best.boundary ? " boundary=true" : "")
        << " q0_optimal=" << yes_no(entry.q0_optimal) << " row=" << entry.a_label
        << " col=" << entry.b_label;
    if (entry.candidates.size() > 1) {
        out << " candidates=";
        for (std::size_t i = 0; i < entry.candidates.size(); ++i)
            out << (i ? "|" : "") << num(entry.candidates[i].exponent) << "/log"
                << entry.candidates[i].log_power;
        if (entry.tie) out << " tie=true";
    }
    out << '\n';
}

// ----------------------------------------------------------------------------

struct SimulateArgs {
    std::vector<std::int64_t> n{1000, 10000, 100000};
    std::vector<double> beta{0.45};
    std::vector<double> epsilon{0.3};
    std::vector<std::string> a;
    std::vector<std::string> b{"0.2"};
    double sigma = 1.0;
    std::vector<std::string> estimators{"q0", "q2", "q4"};
    int reps = 200;
    std::string layout = "full-overlap";
    std::string signs = "positive";
    std::uint64_t seed = 20240101;
    unsigned threads = 0;
    std::string sigma_mode = "known";
    std::string out;
};

void cmd_simulate(const SimulateArgs& args, std::ostream& out) {
    SimConfig cfg;
    cfg.n_values = args.n;
    cfg.betas = args.beta;
    cfg.epsilons = args.epsilon;
    cfg.a_values.clear();
    for (const auto& s : args.a) cfg.a_values.push_back(SignalStrength::parse(s));
    cfg.b_values.clear();
    for (const auto& s : args.b) cfg.b_values.push_back(SignalStrength::parse(s));
    cfg.sigma = args.sigma;
    cfg.estimators.clear();
    for (const auto& s : args.estimators) cfg.estimators.push_back(parse_estimator(s));
    cfg.replications = args.reps;
    cfg.pair_config = {parse_layout(args.layout), parse_sign_pattern(args.signs)};
    cfg.master_seed = args.seed;
    cfg.threads = args.threads;
    cfg.sigma_mode = parse_sigma_mode(args.sigma_mode);

    const auto rows = run_mse_experiment(cfg);
    if (args.out == "-") {
        write_sim_csv(out, rows);
    } else {
        write_sim_csv_file(args.out, rows);
        out << "wrote " << rows.size() << " rows to " << args.out << '\n';
    }
}

// ----------------------------------------------------------------------------

struct DetectArgs {
    std::string input;
    std::string sigma = "auto";
    double beta = 0, epsilon = 0;
    std::string a, b;
};

void cmd_detect(const DetectArgs& args, std::ostream& out) {
    const ObservationPair obs = read_pairs_csv_file(args.input);
    bool estimated = false;
    const double sigma = parse_sigma(args.sigma, obs, estimated);
    const auto n = static_cast<std::int64_t>(obs.x.size());
    const SignalStrength a = SignalStrength::parse(args.a), b = SignalStrength::parse(args.b);
    const ProblemParams params = derive_params(n, args.beta, args.epsilon, a, b, sigma);
    const TestOutcome t = run_test_two_seq(obs.x, obs.y, sigma, params);
    out << "n=" << n << " sigma=" << num(sigma) << (estimated ? " (mad)" : "")
        << " estimator=" << to_string(t.estimator) << " tau=" << num(t.tau)
        << " statistic=" << num(t.statistic) << " threshold=" << num(t.threshold)
        << " reject=" << yes_no(t.reject);
    if (!a.is_log() && !b.is_log())
        out << " region=" << to_string(detect_region_two_seq(args.beta, args.epsilon, a.value, b.value));
    out << '\n';
}

// ----------------------------------------------------------------------------

struct EstimateArgs {
    std::string input;
    std::string estimator;
    std::string sigma = "auto";
    std::optional<double> tau;
    std::optional<double> beta, epsilon;
    std::string a, b;
};

void cmd_estimate(const EstimateArgs& args, std::ostream& out) {
    const ObservationPair obs = read_pairs_csv_file(args.input);
    const EstimatorKind kind = parse_estimator(args.estimator);
    bool estimated = false;
    const double sigma = parse_sigma(args.sigma, obs, estimated);
    const auto n = static_cast<std::int64_t>(obs.x.size());
    const double tau = args.tau.value_or(uses_threshold(kind) ? default_tau(kind, n) : 0.0);
    const EstimatorSettings settings(kind, tau, sigma);
    const double value = is_one_sequence(kind) ? estimate(settings, obs.y) : estimate(settings, obs.x, obs.y);

    out << "estimator=" << to_string(kind) << " estimate=" << num(value) << " n=" << n
        << " sigma=" << num(sigma) << (estimated ? " (mad)" : "");
    if (uses_threshold(kind)) out << " tau=" << num(tau) << (settings.tau_below_one() ? " warning=tau<1" : "");
    out << '\n';

    if (args.beta && !args.b.empty()) {
        const SignalStrength b = SignalStrength::parse(args.b);
        if (is_one_sequence(kind)) {
            out << "rate " << describe(rate_one_seq(*args.beta, b)) << '\n';
        } else {
            if (!args.epsilon) throw UsageError("--epsilon is required for a two-sequence rate");
            const SignalStrength a = args.a.empty() ? b : SignalStrength::parse(args.a);
            const TableEntry entry = rate_two_seq_general(*args.beta, *args.epsilon, a, b);
            out << "rate regime=" << to_string(entry.regime) << ' ' << describe(entry.rate) << '\n';
        }
    }
}

// ----------------------------------------------------------------------------

struct AffinityArgs {
    std::string kind;
    std::int64_t k = 0, q = 1;
    std::optional<double> rho;
    std::string rho_as_delta;
    double sigma = 1.0;
};

void cmd_affinity(const AffinityArgs& args, std::ostream& out) {
    const PriorKind kind = parse_prior_kind(args.kind);
    double rho = 0.0;
    if (!args.rho_as_delta.empty()) {
        if (args.rho_as_delta == "sigma/sqrt(q)") {
            rho = args.sigma / std::sqrt(static_cast<double>(args.q));
        } else {
            try {
                rho = std::stod(args.rho_as_delta);
            } catch (const std::logic_error&) {
                throw UsageError("--rho-as-delta expects a number or 'sigma/sqrt(q)'");
            }
        }
    } else if (args.rho) {
        rho = *args.rho;
    } else {
        throw UsageError("one of --rho or --rho-as-delta is required");
    }

    AffinityResult res;
    if (kind == PriorKind::Perturbation) {
        res = affinity_perturbation(args.q, rho, args.sigma);
    } else {
        if (args.k < 1) throw UsageError("--k is required for mixture priors");
        res = affinity_mixture(kind, args.k, args.q, rho, args.sigma);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.7g", res.exact);
    out << "kind=" << to_string(kind) << " exact=" << (res.exact_available ? buf : "unavailable");
    std::snprintf(buf, sizeof buf, "%.7g", res.bound);
    out << " bound=" << buf << '\n';
}

// ----------------------------------------------------------------------------

struct PlotArgs {
    std::string input, out;
    std::string x = "log-n", y = "log-mse";
    std::string title;
};

void cmd_plot(const PlotArgs& args, std::ostream& out) {
    if (args.x != "log-n" || args.y != "log-mse")
        throw UsageError("only --x log-n --y log-mse is supported");
    const auto rows = read_sim_csv_file(args.input);
    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw IoError("cannot open '" + args.out + "' for writing");
    file << render_mse_svg(rows, args.title);
    if (!file) throw IoError("write to '" + args.out + "' failed");
    out << "wrote " << args.out << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quadratic functional estimation and simultaneous signal detection "
                 "in the Gaussian two-sequence model"};
    app.name("twoseq");
    app.require_subcommand(1, 1);

    RatesArgs rates;
    auto* c_rates = app.add_subcommand("rates", "minimax rate, regime and optimal estimator");
    c_rates->add_option("--beta", rates.beta, "sparsity exponent")->required();
    c_rates->add_option("--epsilon", rates.epsilon, "simultaneous sparsity exponent");
    c_rates->add_option("--b", rates.b, "strength of theta: exponent or log:<coef>")->required();
    c_rates->add_option("--a", rates.a, "strength of mu (defaults to --b)");
    c_rates->add_flag("--log-scale", rates.log_scale, "read --a/--b as log-scale coefficients");
    c_rates->add_flag("--one-seq", rates.one_seq, "single-sequence rate for theta only");

    SimulateArgs sim;
    std::string sim_config;
    auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo MSE experiment");
    c_sim->add_option("--config", sim_config, "flat key = value file; flags override it");
    c_sim->add_option("--n", sim.n, "vector lengths")->delimiter(',');
    c_sim->add_option("--beta", sim.beta)->delimiter(',');
    c_sim->add_option("--epsilon", sim.epsilon)->delimiter(',');
    c_sim->add_option("--a", sim.a, "mu strengths (empty: same as b)")->delimiter(',');
    c_sim->add_option("--b", sim.b, "theta strengths")->delimiter(',');
    c_sim->add_option("--sigma", sim.sigma);
    c_sim->add_option("--estimators", sim.estimators)->delimiter(',');
    c_sim->add_option("--reps", sim.reps, "replications per cell");
    c_sim->add_option("--layout", sim.layout, "full-overlap|overlap-only|null");
    c_sim->add_option("--signs", sim.signs, "positive|rademacher");
    c_sim->add_option("--seed", sim.seed, "master seed");
    c_sim->add_option("--threads", sim.threads, "worker threads (0: auto)");
    c_sim->add_option("--sigma-mode", sim.sigma_mode, "known|mad");
    c_sim->add_option("--out", sim.out, "output CSV ('-' for stdout)");

    DetectArgs det;
    auto* c_det = app.add_subcommand("detect", "simultaneous-signal test on paired data");
    c_det->add_option("--input", det.input, "CSV with header x,y")->required();
    c_det->add_option("--sigma", det.sigma, "auto (MAD) or a value");
    c_det->add_option("--beta", det.beta)->required();
    c_det->add_option("--epsilon", det.epsilon)->required();
    c_det->add_option("--a", det.a)->required();
    c_det->add_option("--b", det.b)->required();

    EstimateArgs est;
    auto* c_est = app.add_subcommand("estimate", "evaluate an estimator on paired data");
    c_est->add_option("--input", est.input, "CSV with header x,y")->required();
    c_est->add_option("--estimator", est.estimator, "q0..q5")->required();
    c_est->add_option("--sigma", est.sigma, "auto (MAD) or a value");
    c_est->add_option("--tau", est.tau, "threshold (default per estimator)");
    c_est->add_option("--beta", est.beta);
    c_est->add_option("--epsilon", est.epsilon);
    c_est->add_option("--a", est.a);
    c_est->add_option("--b", est.b);

    AffinityArgs aff;
    auto* c_aff = app.add_subcommand("affinity", "chi-square affinity of a prior pair");
    c_aff->add_option("--kind", aff.kind, "shift|sign|full|perturb")->required();
    c_aff->add_option("--k", aff.k);
    c_aff->add_option("--q", aff.q);
    c_aff->add_option("--rho", aff.rho, "signal size (delta for perturb)");
    c_aff->add_option("--rho-as-delta", aff.rho_as_delta, "number or sigma/sqrt(q)");
    c_aff->add_option("--sigma", aff.sigma);

    PlotArgs plot;
    auto* c_plot = app.add_subcommand("plot", "SVG chart of a simulation CSV");
    c_plot->add_option("--input", plot.input)->required();
    c_plot->add_option("--out", plot.out)->required();
    c_plot->add_option("--x", plot.x);
    c_plot->add_option("--y", plot.y);
    c_plot->add_option("--title", plot.title);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*c_rates) {
            cmd_rates(rates, out);
        } else if (*c_sim) {
            if (!sim_config.empty()) apply_config(*c_sim, sim_config);
            if (sim.out.empty()) throw UsageError("simulate needs --out (flag or config)");
            cmd_simulate(sim, out);
        } else if (*c_det) {
            cmd_detect(det, out);
        } else if (*c_est) {
            cmd_estimate(est, out);
        } else if (*c_aff) {
            cmd_affinity(aff, out);
        } else if (*c_plot) {
            cmd_plot(plot, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const EmptyInput& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kConstraint;
    }
    return kOk;
}

}  // namespace twoseq::cli
