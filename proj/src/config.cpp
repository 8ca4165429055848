#include "spdde/config.hpp"

#include "spdde/comparison.hpp"
#include "spdde/error.hpp"
#include "spdde/history.hpp"
#include "spdde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace spdde {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw Error(ErrorKind::config, path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!ok.count(item.key())) fail(join(path, item.key()), "unknown key");
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(join(path, key), "missing required key");
    return obj.at(key);
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
}

double positive(const json& v, const std::string& path) {
    const double d = number(v, path);
    if (!(d > 0.0)) fail(path, "must be > 0");
    return d;
}

std::uint64_t unsigned_integer(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(path, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

/// Scalar broadcast to every mode, or a list of exactly `dim` values.
std::vector<double> per_mode(const json& v, const std::string& path, std::size_t dim) {
    if (v.is_array()) {
        auto out = number_list(v, path);
        if (out.size() != dim) fail(path, "expected " + std::to_string(dim) + " values");
        return out;
    }
    return std::vector<double>(dim, number(v, path));
}

SpectralOperator parse_eigenvalues(const json& j, const std::string& path, std::size_t dim) {
    check_keys(j, path, {"family", "values"});
    const std::string family = text(require(j, path, "family"), join(path, "family"));
    if (family == "dirichlet_laplacian") {
        if (j.contains("values")) fail(join(path, "values"), "not used by dirichlet_laplacian");
        return make_dirichlet_laplacian(dim);
    }
    if (family == "explicit") {
        auto values = number_list(require(j, path, "values"), join(path, "values"));
        if (values.size() != dim) fail(join(path, "values"), "length must equal problem.dimension");
        try {
            return SpectralOperator(std::move(values), "explicit");
        } catch (const Error& e) {
            fail(join(path, "values"), e.what());
        }
    }
    fail(join(path, "family"), "unknown family '" + family + "'");
}

WienerModel parse_q_spectrum(const json& j, const std::string& path, std::size_t dim) {
    check_keys(j, path, {"family", "scale", "values"});
    const std::string family = text(require(j, path, "family"), join(path, "family"));
    if (family == "inverse_square") {
        if (j.contains("values")) fail(join(path, "values"), "not used by inverse_square");
        const double scale = j.contains("scale") ? positive(j.at("scale"), join(path, "scale")) : 1.0;
        return inverse_square_spectrum(dim, scale);
    }
    if (family == "explicit") {
        if (j.contains("scale")) fail(join(path, "scale"), "not used by explicit");
        auto values = number_list(require(j, path, "values"), join(path, "values"));
        if (values.size() != dim) fail(join(path, "values"), "length must equal problem.dimension");
        try {
            return WienerModel(std::move(values));
        } catch (const Error& e) {
            fail(join(path, "values"), e.what());
        }
    }
    fail(join(path, "family"), "unknown family '" + family + "'");
}

JumpModel parse_jumps(const json& j, const std::string& path) {
    check_keys(j, path, {"marks", "intensities"});
    auto marks = number_list(require(j, path, "marks"), join(path, "marks"));
    auto rates = number_list(require(j, path, "intensities"), join(path, "intensities"));
    if (marks.size() != rates.size()) fail(join(path, "intensities"), "one intensity per mark");
    if (marks.empty()) return JumpModel();
    try {
        return JumpModel(std::move(marks), std::move(rates));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

InitialDatum parse_initial(const json& j, const std::string& path, std::size_t dim, double tau) {
    check_keys(j, path, {"shape", "amplitude", "modes"});
    const std::string shape = text(require(j, path, "shape"), join(path, "shape"));
    const double amp = number_or(j, path, "amplitude", 1.0);
    const std::vector<double> modes =
        j.contains("modes") ? per_mode(j.at("modes"), join(path, "modes"), dim) : std::vector<double>(dim, 1.0);
    const FieldState profile(modes);
    if (shape == "constant") {
        return [profile, amp](double) { return amp * profile; };
    }
    if (shape == "ramp") {
        // 1/2 at theta = -tau rising linearly to 1 at theta = 0
        return [profile, amp, tau](double theta) { return (amp * (1.0 + 0.5 * theta / tau)) * profile; };
    }
    fail(join(path, "shape"), "unknown shape '" + shape + "'");
}

SPDDEProblem parse_problem(const json& j, const std::string& path) {
    check_keys(j, path, {"dimension", "eigenvalues", "q_spectrum", "jumps", "tau", "coefficients", "initial",
                         "budgets"});
    const std::uint64_t dim = unsigned_integer(require(j, path, "dimension"), join(path, "dimension"));
    if (dim == 0) fail(join(path, "dimension"), "must be >= 1");
    const double tau = positive(require(j, path, "tau"), join(path, "tau"));

    SPDDEProblem prob{parse_eigenvalues(require(j, path, "eigenvalues"), join(path, "eigenvalues"), dim),
                      parse_q_spectrum(require(j, path, "q_spectrum"), join(path, "q_spectrum"), dim),
                      j.contains("jumps") ? parse_jumps(j.at("jumps"), join(path, "jumps")) : JumpModel(),
                      tau,
                      {},
                      parse_initial(require(j, path, "initial"), join(path, "initial"), dim, tau),
                      1.0,
                      1.0};

    const json& coeffs = require(j, path, "coefficients");
    const std::string cpath = join(path, "coefficients");
    if (!coeffs.is_array() || coeffs.empty()) fail(cpath, "expected a non-empty array");
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const std::string ep = cpath + "[" + std::to_string(i) + "]";
        const json& c = coeffs[i];
        check_keys(c, ep, {"index", "drift_x", "drift_y", "diffusion_x", "diffusion_y", "jump_x", "jump_y"});
        const json& idx = require(c, ep, "index");
        if (!idx.is_number_integer()) fail(join(ep, "index"), "expected an integer");
        const auto p = static_cast<ModeIndex>(idx.get<std::int64_t>());
        if (prob.families.count(p)) fail(join(ep, "index"), "duplicate index");
        auto field = [&](const char* key) {
            return c.contains(key) ? per_mode(c.at(key), join(ep, key), dim) : std::vector<double>(dim, 0.0);
        };
        LinearCoefficients lc{field("drift_x"),     field("drift_y"), field("diffusion_x"),
                              field("diffusion_y"), field("jump_x"),  field("jump_y")};
        prob.families.emplace(p, make_linear_family(std::move(lc)));
    }

    const LinearBudgets derived = derive_linear_budgets(prob);
    prob.lipschitz_budget = derived.lipschitz > 0.0 ? derived.lipschitz : 1.0;
    prob.fourth_moment_budget = derived.fourth_moment > 0.0 ? derived.fourth_moment : 1.0;
    if (j.contains("budgets")) {
        const std::string bp = join(path, "budgets");
        const json& b = j.at("budgets");
        check_keys(b, bp, {"lipschitz", "fourth_moment"});
        if (b.contains("lipschitz")) prob.lipschitz_budget = positive(b.at("lipschitz"), join(bp, "lipschitz"));
        if (b.contains("fourth_moment")) {
            prob.fourth_moment_budget = positive(b.at("fourth_moment"), join(bp, "fourth_moment"));
        }
    }
    return prob;
}

RunBlock parse_run(const json& j, const std::string& path) {
    check_keys(j, path, {"T", "h", "trajectories", "seed", "yosida_ladder", "export_paths"});
    RunBlock run;
    run.T = positive(require(j, path, "T"), join(path, "T"));
    run.h = positive(require(j, path, "h"), join(path, "h"));
    if (j.contains("trajectories")) {
        run.trajectories = unsigned_integer(j.at("trajectories"), join(path, "trajectories"));
        if (run.trajectories == 0) fail(join(path, "trajectories"), "must be >= 1");
    }
    if (j.contains("seed")) run.seed = unsigned_integer(j.at("seed"), join(path, "seed"));
    if (j.contains("yosida_ladder")) {
        run.yosida_ladder = number_list(j.at("yosida_ladder"), join(path, "yosida_ladder"));
        for (double n : run.yosida_ladder) {
            if (!(n > 0.0)) fail(join(path, "yosida_ladder"), "entries must be > 0");
        }
    }
    if (j.contains("export_paths")) run.export_paths = unsigned_integer(j.at("export_paths"), join(path, "export_paths"));
    return run;
}

CertifyBlock parse_certify(const json& j, const std::string& path, const SPDDEProblem& prob) {
    check_keys(j, path, {"lyapunov_weights", "measure", "q", "eta", "u_scale", "yosida_n", "scales"});
    CertifyBlock c;
    if (j.contains("lyapunov_weights")) {
        const std::string wp = join(path, "lyapunov_weights");
        const json& w = j.at("lyapunov_weights");
        if (!w.is_object()) fail(wp, "expected an object keyed by index");
        for (const auto& item : w.items()) {
            ModeIndex p = 0;
            try {
                std::size_t used = 0;
                p = std::stoi(item.key(), &used);
                if (used != item.key().size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                fail(join(wp, item.key()), "keys must be integer indices");
            }
            if (!prob.families.count(p)) fail(join(wp, item.key()), "no coefficient family with this index");
            auto weights = per_mode(item.value(), join(wp, item.key()), prob.dimension());
            for (double v : weights) {
                if (!(v > 0.0)) fail(join(wp, item.key()), "weights must be > 0");
            }
            c.lyapunov_weights[p] = std::move(weights);
        }
    }
    for (const auto& [p, fam] : prob.families) {
        if (!c.lyapunov_weights.count(p)) c.lyapunov_weights[p] = std::vector<double>(prob.dimension(), 1.0);
    }
    if (j.contains("measure")) {
        c.measure = text(j.at("measure"), join(path, "measure"));
        if (c.measure != "head" && c.measure != "sup") fail(join(path, "measure"), "expected 'head' or 'sup'");
    }
    if (j.contains("q")) {
        c.q = number(j.at("q"), join(path, "q"));
        if (!(c.q >= 1.0)) fail(join(path, "q"), "must be >= 1");
    }
    if (j.contains("eta")) {
        c.eta = number_list(j.at("eta"), join(path, "eta"));
        for (double e : c.eta) {
            if (!(e > 0.0) || e > 1.0) fail(join(path, "eta"), "entries must lie in (0, 1]");
        }
    }
    if (j.contains("u_scale")) c.u_scale = positive(j.at("u_scale"), join(path, "u_scale"));
    if (j.contains("yosida_n")) c.yosida_n = positive(j.at("yosida_n"), join(path, "yosida_n"));
    if (j.contains("scales")) {
        c.scales = number_list(j.at("scales"), join(path, "scales"));
        if (c.scales.size() < 2) fail(join(path, "scales"), "need at least two scales");
        for (double s : c.scales) {
            if (!(s > 0.0)) fail(join(path, "scales"), "entries must be > 0");
        }
    }
    return c;
}

SwitchingSignal parse_signal(const json& j, const std::string& path, const SPDDEProblem& prob,
                             const CertifyBlock& certify, const RunBlock& run) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::string kind = text(require(j, path, "kind"), join(path, "kind"));
    auto known_index = [&](ModeIndex p, const std::string& at) {
        if (!prob.families.count(p)) fail(at, "index " + std::to_string(p) + " has no coefficient family");
    };
    if (kind == "constant") {
        check_keys(j, path, {"kind", "index"});
        const json& idx = require(j, path, "index");
        if (!idx.is_number_integer()) fail(join(path, "index"), "expected an integer");
        const auto p = static_cast<ModeIndex>(idx.get<std::int64_t>());
        known_index(p, join(path, "index"));
        return SwitchingSignal(p);
    }
    if (kind == "explicit") {
        check_keys(j, path, {"kind", "p0", "switches", "adt"});
        json body = j;
        body.erase("kind");
        SwitchingSignal sig(0);
        try {
            sig = signal_from_json(body);
        } catch (const std::exception& e) {
            fail(path, e.what());
        }
        known_index(sig.initial_index(), join(path, "p0"));
        for (const auto& ev : sig.switches()) known_index(ev.index, join(path, "switches"));
        return sig;
    }
    if (kind == "generate_adt") {
        check_keys(j, path, {"kind", "indices", "tau_a", "tau_a_factor", "n0"});
        const auto raw = number_list(require(j, path, "indices"), join(path, "indices"));
        std::vector<ModeIndex> indices;
        for (double v : raw) {
            if (v != std::floor(v)) fail(join(path, "indices"), "expected integers");
            indices.push_back(static_cast<ModeIndex>(v));
            known_index(indices.back(), join(path, "indices"));
        }
        const double n0 = number(require(j, path, "n0"), join(path, "n0"));
        if (!(n0 >= 1.0)) fail(join(path, "n0"), "must be >= 1");
        if (j.contains("tau_a") == j.contains("tau_a_factor")) {
            fail(join(path, "tau_a"), "give exactly one of tau_a and tau_a_factor");
        }
        double tau_a = 0.0;
        if (j.contains("tau_a")) {
            tau_a = positive(j.at("tau_a"), join(path, "tau_a"));
        } else {
            const double factor = positive(j.at("tau_a_factor"), join(path, "tau_a_factor"));
            const double mu = mode_comparability(certify.lyapunov_weights);
            if (!(mu > 1.0)) fail(join(path, "tau_a_factor"), "needs lyapunov weights with mu > 1");
            const GeneratorBound g = quadratic_generator_bound(prob);
            if (!(g.gamma1 + g.gamma2 < 0.0) || !(g.gamma2 > 0.0)) {
                fail(join(path, "tau_a_factor"), "generator bound gives no decay rate");
            }
            tau_a = factor * dwell_time_threshold(mu, halanay_lambda(g.gamma1, g.gamma2, prob.tau));
        }
        RngStream rng(run.seed, 0, StreamRole::switching);
        try {
            return generate_adt_signal(indices, tau_a, n0, run.T, run.h, rng);
        } catch (const Error& e) {
            fail(path, e.what());
        }
    }
    fail(join(path, "kind"), "unknown kind '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const ConfigOverrides& overrides) {
    check_keys(doc, "", {"schema_version", "problem", "signal", "run", "certify"});
    const json& version = require(doc, "", "schema_version");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
        fail("schema_version", "expected " + std::to_string(kSchemaVersion));
    }
    SPDDEProblem prob = parse_problem(require(doc, "", "problem"), "problem");
    RunBlock run = parse_run(require(doc, "", "run"), "run");
    if (overrides.seed) run.seed = *overrides.seed;
    if (overrides.trajectories) {
        if (*overrides.trajectories == 0) fail("--trajectories", "must be >= 1");
        run.trajectories = *overrides.trajectories;
    }
    try {
        grid_steps(prob.tau, run.h, "delay");
    } catch (const Error&) {
        fail("run.h", "problem.tau must be an integer multiple of h");
    }
    try {
        grid_steps(run.T, run.h, "horizon");
    } catch (const Error&) {
        fail("run.h", "run.T must be an integer multiple of h");
    }
    CertifyBlock certify =
        doc.contains("certify") ? parse_certify(doc.at("certify"), "certify", prob) : parse_certify(json::object(), "certify", prob);
    SwitchingSignal sig = parse_signal(require(doc, "", "signal"), "signal", prob, certify, run);
    for (const auto& ev : sig.switches()) {
        if (ev.time > run.T) break;
        try {
            grid_steps(ev.time, run.h, "switch");
        } catch (const Error&) {
            fail("signal.switches", "switch instants must lie on the run.h grid");
        }
    }
    try {
        check_hypothesis_budgets(prob, 1000, run.seed);
    } catch (const HypothesisViolation& e) {
        fail("problem.budgets", e.what());
    }
    nlohmann::json sj = signal_to_json(sig);
    return ExperimentConfig{std::move(prob), std::move(sig), std::move(run), std::move(certify), std::move(sj)};
}

ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::config, "cannot read config " + path.string());
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::config, path.string() + ": " + e.what());
    }
    return parse_config(doc, overrides);
}

LyapunovSpec make_lyapunov_spec(const ExperimentConfig& cfg) {
    const CertifyBlock& c = cfg.certify;
    double wmin = std::numeric_limits<double>::infinity();
    double wmax = 0.0;
    for (const auto& [p, w] : c.lyapunov_weights) {
        for (double v : w) {
            wmin = std::min(wmin, v);
            wmax = std::max(wmax, v);
        }
    }
    LyapunovSpec spec;
    spec.V = quadratic_lyapunov(c.lyapunov_weights);
    spec.alpha1 = linear_class_k(wmin);
    spec.alpha2 = linear_class_k(wmax);
    spec.h = c.measure == "sup" ? sup_power_measure(c.q) : head_power_measure(c.q);
    spec.h0 = spec.h;
    spec.mu = mode_comparability(c.lyapunov_weights);
    spec.U = linear_class_k(c.u_scale);
    spec.q = c.q;
    return spec;
}

}  // namespace spdde
