#include "spdde/cli.hpp"

#include "spdde/comparison.hpp"
#include "spdde/config.hpp"
#include "spdde/csv.hpp"
#include "spdde/error.hpp"
#include "spdde/integrator.hpp"
#include "spdde/rng.hpp"
#include "spdde/stability.hpp"
#include "spdde/switching.hpp"

#include <CLI11.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace spdde {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "spdde_out";
    std::optional<std::size_t> trajectories;
    unsigned threads = 1;
};

void add_common(CLI::App* app, CommonOptions& o, bool config_required) {
    auto* c = app->add_option("--config", o.config, "experiment config (JSON)");
    if (config_required) c->required();
    app->add_option("--seed", o.seed, "master seed (overrides SPDDE_SEED and the config)");
    app->add_option("--out", o.out_dir, "output directory");
    app->add_option("--trajectories", o.trajectories, "Monte Carlo trajectory count override");
    app->add_option("--threads", o.threads, "worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u));
}

std::optional<std::uint64_t> resolve_seed(const CommonOptions& o) {
    if (o.seed) return o.seed;
    if (const char* env = std::getenv("SPDDE_SEED"); env && *env) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (errno != 0 || *end != '\0' || env[0] == '-') {
            throw Error(ErrorKind::config, "SPDDE_SEED is not an unsigned integer");
        }
        return static_cast<std::uint64_t>(v);
    }
    return std::nullopt;
}

ExperimentConfig load(const CommonOptions& o) {
    ConfigOverrides ov;
    ov.seed = resolve_seed(o);
    ov.trajectories = o.trajectories;
    return load_config(o.config, ov);
}

MonteCarloSettings mc_settings(const ExperimentConfig& cfg, const CommonOptions& o) {
    MonteCarloSettings mc;
    mc.T = cfg.run.T;
    mc.h = cfg.run.h;
    mc.trajectories = cfg.run.trajectories;
    mc.seed = cfg.run.seed;
    mc.workers = o.threads;
    return mc;
}

std::string zero_padded(std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04zu", i);
    return buf;
}

void write_report(const fs::path& dir, const std::string& stem, const CertificateReport& r) {
    write_text_file(dir / (stem + ".json"), r.to_json().dump(2) + "\n");
}

void summarize(std::ostream& out, const CertificateReport& r) {
    out << r.name << ": " << (r.pass ? "pass" : "fail") << " margin=" << format_double(r.margin) << '\n';
    if (const CertificateRow* f = r.first_failure()) {
        out << "  first failure at t=" << format_double(f->time) << " (" << f->label
            << ") estimate=" << format_double(f->estimate) << " bound=" << format_double(f->bound) << '\n';
    }
}

int cmd_simulate(const CommonOptions& o, std::ostream& out) {
    const ExperimentConfig cfg = load(o);
    EnsembleOptions opts;
    opts.trajectories = cfg.run.trajectories;
    opts.master_seed = cfg.run.seed;
    opts.workers = o.threads;
    const auto paths = simulate_ensemble(cfg.problem, cfg.signal, cfg.run.T, cfg.run.h, opts);
    const fs::path dir(o.out_dir);
    const std::size_t exported = std::min(cfg.run.export_paths, paths.size());
    for (std::size_t i = 0; i < exported; ++i) {
        std::ostringstream s;
        write_trajectory_csv(s, paths[i]);
        write_text_file(dir / ("trajectory_" + zero_padded(i) + ".csv"), s.str());
    }
    std::ostringstream s;
    write_moments_csv(s, mean_measure_curve(paths, head_power_measure(2.0)));
    write_text_file(dir / "moments.csv", s.str());
    out << "simulated " << paths.size() << " trajectories, exported " << exported << '\n';
    return kExitPass;
}

int cmd_yosida(const CommonOptions& o, std::ostream& out) {
    const ExperimentConfig cfg = load(o);
    const auto gaps = yosida_gap_ladder(cfg.problem, cfg.signal, cfg.run.yosida_ladder, cfg.run.T, cfg.run.h,
                                        cfg.run.trajectories, cfg.run.seed, o.threads);
    std::ostringstream s;
    s << "n,gap\n";
    bool monotone = true;
    for (std::size_t r = 0; r < gaps.size(); ++r) {
        s << format_double(cfg.run.yosida_ladder[r]) << ',' << format_double(gaps[r]) << '\n';
        if (r > 0 && gaps[r] > gaps[r - 1]) monotone = false;
    }
    write_text_file(fs::path(o.out_dir) / "yosida_gap.csv", s.str());
    out << s.str();
    out << "ladder " << (monotone ? "non-increasing" : "not monotone") << '\n';
    return monotone ? kExitPass : kExitCertificateFailure;
}

int cmd_certify(const std::string& kind, const CommonOptions& o, std::ostream& out) {
    const ExperimentConfig cfg = load(o);
    const LyapunovSpec spec = make_lyapunov_spec(cfg);
    const MonteCarloSettings mc = mc_settings(cfg, o);
    const fs::path dir(o.out_dir);

    if (kind == "gasm" || kind == "gasp") {
        GasmPipelineSettings settings;
        settings.mc = mc;
        settings.scales = cfg.certify.scales;
        settings.etas = cfg.certify.eta;
        const GasmPipelineResult res = run_gasm_pipeline(cfg.problem, cfg.signal, spec, settings);
        std::vector<double> env;
        for (double t : res.fresh_curve.times) env.push_back(res.fit(res.h0_of_xi, t));
        std::ostringstream s;
        write_curve_csv(s, res.fresh_curve.times, res.fresh_curve.estimate, env);
        write_text_file(dir / "gasm_curve.csv", s.str());
        if (kind == "gasm") {
            write_report(dir, "report_gasm", res.gasm);
            summarize(out, res.gasm);
            return res.gasm.pass ? kExitPass : kExitCertificateFailure;
        }
        bool all = true;
        for (std::size_t i = 0; i < res.gasp.size(); ++i) {
            write_report(dir, "report_gasp_" + std::to_string(i), res.gasp[i]);
            summarize(out, res.gasp[i]);
            all = all && res.gasp[i].pass;
        }
        return all ? kExitPass : kExitCertificateFailure;
    }
    if (kind == "comparison") {
        const GeneratorBound g = quadratic_generator_bound(cfg.problem);
        const auto& V = spec.V;
        const auto& prob = cfg.problem;
        auto psi = [&V, &prob](double theta) {
            const FieldState x = prob.xi(theta);
            double best = 0.0;
            for (const auto& [p, fam] : prob.families) best = std::max(best, V.value(x, p));
            return best;
        };
        const ComparisonModel model = halanay_model(g.gamma1, g.gamma2, prob.tau, psi);
        ScalarCurve ubar;
        MeanCurve mean;
        CertificateReport r = comparison_certificate(prob, cfg.signal, spec, model, mc, &ubar, &mean);
        r.note("gamma1=" + format_double(g.gamma1) + " gamma2=" + format_double(g.gamma2));
        std::ostringstream s;
        write_curve_csv(s, mean.times, mean.estimate, ubar.values);
        write_text_file(dir / "comparison_curve.csv", s.str());
        write_report(dir, "report_comparison", r);
        summarize(out, r);
        return r.pass ? kExitPass : kExitCertificateFailure;
    }
    // fixed-index
    const CertificateReport r =
        check_fixed_index_decrement(cfg.problem, cfg.signal, spec, cfg.certify.yosida_n, mc);
    write_report(dir, "report_fixed_index", r);
    summarize(out, r);
    return r.pass ? kExitPass : kExitCertificateFailure;
}

struct HalanayOptions {
    std::optional<double> a1, a2, tau, mu;
};

int cmd_halanay(const HalanayOptions& h, const CommonOptions& o, std::ostream& out) {
    double a1 = 0.0, a2 = 0.0, tau = 0.0, mu = 0.0;
    if (!o.config.empty()) {
        const ExperimentConfig cfg = load(o);
        const GeneratorBound g = quadratic_generator_bound(cfg.problem);
        a1 = g.gamma1;
        a2 = g.gamma2;
        tau = cfg.problem.tau;
        mu = mode_comparability(cfg.certify.lyapunov_weights);
    }
    if (h.a1) a1 = *h.a1;
    if (h.a2) a2 = *h.a2;
    if (h.tau) tau = *h.tau;
    if (h.mu) mu = *h.mu;
    if (o.config.empty() && (!h.a1 || !h.a2 || !h.tau)) {
        throw Error(ErrorKind::config, "halanay needs --a1, --a2 and --tau or a --config");
    }
    const double lambda = halanay_lambda(a1, a2, tau);
    out << "lambda_star=" << format_double(lambda) << '\n';
    if (mu > 1.0) out << "threshold=" << format_double(dwell_time_threshold(mu, lambda)) << '\n';
    return kExitPass;
}

SwitchingSignal read_signal_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::config, "cannot read signal " + path);
    try {
        return signal_from_json(nlohmann::json::parse(f));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::config, path + ": " + e.what());
    }
}

struct AdtOptions {
    std::string signal_file;
    std::optional<double> tau_a, n0, horizon, grid_step;
    std::vector<int> indices;
};

int cmd_adt_verify(const AdtOptions& a, const CommonOptions& o, std::ostream& out) {
    std::optional<SwitchingSignal> sig;
    if (!a.signal_file.empty()) {
        sig = read_signal_file(a.signal_file);
    } else if (!o.config.empty()) {
        sig = load(o).signal;
    } else {
        throw Error(ErrorKind::config, "adt verify needs --signal or --config");
    }
    double tau_a = sig->adt() ? sig->adt()->tau_a : 0.0;
    double n0 = sig->adt() ? sig->adt()->n0 : 0.0;
    if (a.tau_a) tau_a = *a.tau_a;
    if (a.n0) n0 = *a.n0;
    if (!(tau_a > 0.0)) throw Error(ErrorKind::config, "no tau_a: give --tau-a or adt metadata");
    const AdtVerdict v = verify_adt(*sig, tau_a, n0);
    if (v.holds) {
        out << "adt holds: tau_a=" << format_double(tau_a) << " n0=" << format_double(n0) << '\n';
        return kExitPass;
    }
    const AdtWindow& w = *v.first_violation;
    out << "adt violated: window [" << format_double(w.t1) << ", " << format_double(w.t2)
        << "] count=" << w.count << " allowed=" << format_double(w.allowed) << '\n';
    return kExitCertificateFailure;
}

int cmd_adt_generate(const AdtOptions& a, const CommonOptions& o, std::ostream& out) {
    nlohmann::json doc;
    if (!o.config.empty()) {
        doc = load(o).signal_json;
    } else {
        if (!a.tau_a || !a.n0 || !a.horizon || a.indices.empty()) {
            throw Error(ErrorKind::config, "adt generate needs --indices, --tau-a, --n0 and --horizon or a --config");
        }
        const std::uint64_t seed = resolve_seed(o).value_or(0);
        RngStream rng(seed, 0, StreamRole::switching);
        doc = signal_to_json(generate_adt_signal(a.indices, *a.tau_a, *a.n0, *a.horizon,
                                                 a.grid_step.value_or(0.0), rng));
    }
    const std::string text = doc.dump(2) + "\n";
    write_text_file(fs::path(o.out_dir) / "signal.json", text);
    out << text;
    return kExitPass;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Switched stochastic delay equations: simulation and stability certificates", "spdde"};
    app.require_subcommand(1);

    CommonOptions common;

    auto* simulate = app.add_subcommand("simulate", "simulate trajectories and moment curves");
    add_common(simulate, common, true);

    auto* yosida = app.add_subcommand("yosida-converge", "coupled gap between approximating and mild paths");
    add_common(yosida, common, true);

    auto* certify = app.add_subcommand("certify", "stability certificates");
    certify->require_subcommand(1);
    std::string certify_kind;
    for (const char* k : {"gasm", "gasp", "comparison", "fixed-index"}) {
        auto* sub = certify->add_subcommand(k, std::string("certificate ") + k);
        add_common(sub, common, true);
        sub->callback([&certify_kind, k] { certify_kind = k; });
    }

    HalanayOptions hal;
    auto* halanay = app.add_subcommand("halanay", "decay rate and dwell-time threshold");
    add_common(halanay, common, false);
    halanay->add_option("--a1", hal.a1, "coefficient of u");
    halanay->add_option("--a2", hal.a2, "coefficient of the delayed sup");
    halanay->add_option("--tau", hal.tau, "delay");
    halanay->add_option("--mu", hal.mu, "mode comparability constant");

    AdtOptions adt_opts;
    auto* adt = app.add_subcommand("adt", "average dwell-time tooling");
    adt->require_subcommand(1);
    auto* verify = adt->add_subcommand("verify", "check a signal against (tau_a, N0)");
    auto* generate = adt->add_subcommand("generate", "generate a signal satisfying (tau_a, N0)");
    for (auto* sub : {verify, generate}) {
        add_common(sub, common, false);
        sub->add_option("--tau-a", adt_opts.tau_a, "average dwell time");
        sub->add_option("--n0", adt_opts.n0, "chatter bound");
    }
    verify->add_option("--signal", adt_opts.signal_file, "signal JSON file");
    generate->add_option("--horizon", adt_opts.horizon, "signal horizon");
    generate->add_option("--grid-step", adt_opts.grid_step, "snap switch instants to this grid");
    generate->add_option("--indices", adt_opts.indices, "index set");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(common, out);
        if (yosida->parsed()) return cmd_yosida(common, out);
        if (certify->parsed()) return cmd_certify(certify_kind, common, out);
        if (halanay->parsed()) return cmd_halanay(hal, common, out);
        if (verify->parsed()) return cmd_adt_verify(adt_opts, common, out);
        if (generate->parsed()) return cmd_adt_generate(adt_opts, common, out);
    } catch (const HypothesisViolation& e) {
        err << "error: hypothesis violated: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return kExitConfigError;
    }
    err << "error: no subcommand\n";
    return kExitConfigError;
}

}  // namespace spdde
