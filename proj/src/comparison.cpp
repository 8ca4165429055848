#include "spdde/comparison.hpp"

#include "spdde/error.hpp"
#include "spdde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace spdde {

namespace {

constexpr double kBlowUp = 1e15;

std::set<std::size_t> reset_steps(const std::vector<double>& instants, double T, double h) {
    std::set<std::size_t> steps;
    for (double t : instants) {
        if (t > T + 1e-12 * std::max(1.0, T)) continue;
        steps.insert(grid_steps(t, h, "reset instant"));
    }
    return steps;
}

}  // namespace

double ScalarCurve::at(double t) const {
    const double pos = t / h;
    const double m = std::round(pos);
    if (!(t >= 0.0) || std::abs(pos - m) > 1e-9 * std::max(1.0, pos) ||
        static_cast<std::size_t>(m) >= values.size()) {
        throw Error(ErrorKind::range, "time is not on the curve grid");
    }
    return values[static_cast<std::size_t>(m)];
}

double window_sup(const ScalarHistory& window) {
    double best = window.sample(0);
    for (std::size_t j = 1; j < window.size(); ++j) best = std::max(best, window.sample(j));
    return best;
}

ComparisonModel halanay_model(double gamma1, double gamma2, double tau,
                              std::function<double(double)> psi) {
    ComparisonModel model;
    model.phi = [gamma1, gamma2](double u, const ScalarHistory& window) {
        return gamma1 * u + gamma2 * window_sup(window);
    };
    model.psi = std::move(psi);
    model.tau = tau;
    model.gamma1 = gamma1;
    model.gamma2 = gamma2;
    return model;
}

namespace {

/// Euler loop shared by the plain and impulsive systems.
ScalarCurve euler_delay(const std::function<double(double, const ScalarHistory&)>& phi,
                        const std::function<double(double)>& psi, double tau, double T, double h,
                        const std::set<std::size_t>& resets, double mu) {
    if (!(T > 0.0)) throw Error(ErrorKind::invalid_time, "horizon must be > 0");
    const std::size_t steps = grid_steps(T, h, "horizon");
    ScalarHistory window = ScalarHistory::from_function(psi, tau, h);
    ScalarCurve curve;
    curve.h = h;
    curve.times.reserve(steps + 1);
    curve.values.reserve(steps + 1);
    if (resets.count(0)) window.push(mu * window.latest());
    curve.times.push_back(0.0);
    curve.values.push_back(window.latest());
    for (std::size_t m = 0; m < steps; ++m) {
        const double u = window.latest();
        double next = u + h * phi(u, window);
        if (resets.count(m + 1)) next *= mu;
        if (!std::isfinite(next) || std::abs(next) > kBlowUp) {
            std::ostringstream msg;
            msg << "comparison solution leaves every bound after t=" << curve.times.back();
            throw MaximalIntervalError(curve.times.back(), msg.str());
        }
        window.push(next);
        curve.times.push_back(static_cast<double>(m + 1) * h);
        curve.values.push_back(next);
    }
    return curve;
}

}  // namespace

ScalarCurve solve_comparison_ode(const ComparisonModel& model, double T, double h) {
    return euler_delay(model.phi, model.psi, model.tau, T, h, {}, 1.0);
}

double halanay_lambda(double a1, double a2, double tau) {
    if (!(a2 > 0.0) || !std::isfinite(a1) || !(tau >= 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorKind::invalid_parameter, "halanay needs a2 > 0 and tau >= 0");
    }
    if (a1 + a2 >= 0.0) throw Error(ErrorKind::infeasible, "halanay needs a1 + a2 < 0");
    auto g = [&](double l) { return l + a1 + a2 * std::exp(l * tau); };
    double lo = 0.0;
    double hi = -a1;  // g(-a1) = a2 e^{-a1 tau} > 0
    while (!(g(hi) > 0.0)) hi *= 2.0;
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

CertificateReport verify_halanay_bound(double a1, double a2, double tau, double lambda, double T,
                                       double h) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::invalid_parameter, "decay rate must be positive and finite");
    }
    CertificateReport report("halanay");
    const double g = lambda + a1 + a2 * std::exp(lambda * tau);
    if (g > 0.0) {
        std::ostringstream msg;
        msg << "rate " << lambda << " violates lambda + a1 + a2 e^{lambda tau} <= 0 (excess " << g << ")";
        report.note(msg.str());
    }
    const ComparisonModel model = halanay_model(a1, a2, tau, [](double) { return 1.0; });
    const ScalarCurve u = solve_comparison_ode(model, T, h);
    const double sup0 = 1.0;
    for (std::size_t m = 0; m < u.values.size(); ++m) {
        const double t = u.times[m];
        report.add(t, "u(t)", u.values[m], sup0 * std::exp(-lambda * t) * (1.0 + 1e-6) + h, 0.0, 0.0);
    }
    return report;
}

ScalarCurve solve_impulsive_comparison(double gamma1, double gamma2, double mu,
                                       const std::vector<double>& reset_instants, double u0, double T,
                                       double h, double tau) {
    if (!(gamma1 + gamma2 < 0.0)) throw Error(ErrorKind::invalid_parameter, "need gamma1 + gamma2 < 0");
    if (!(mu > 0.0)) throw Error(ErrorKind::invalid_parameter, "reset factor must be > 0");
    const ComparisonModel model = halanay_model(gamma1, gamma2, tau, [u0](double) { return u0; });
    return euler_delay(model.phi, model.psi, tau, T, h, reset_steps(reset_instants, T, h), mu);
}

double dwell_envelope(double xi0, double mu, double lambda, const std::vector<double>& reset_instants,
                      double t0, double T) {
    if (!(mu > 1.0)) throw Error(ErrorKind::invalid_parameter, "reset factor must be > 1");
    if (!(lambda > 0.0)) throw Error(ErrorKind::invalid_parameter, "decay rate must be > 0");
    const auto nu = std::count_if(reset_instants.begin(), reset_instants.end(),
                                  [&](double t) { return t >= t0 && t < T; });
    return xi0 * std::exp(static_cast<double>(nu) * std::log(mu) - lambda * (T - t0));
}

double dwell_time_threshold(double mu, double lambda) {
    if (!(mu > 1.0) || !(lambda > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "threshold needs mu > 1 and lambda > 0");
    }
    return std::log(mu) / lambda;
}

CertificateReport comparison_certificate(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                         const LyapunovSpec& spec, const ComparisonModel& model,
                                         const MonteCarloSettings& mc, ScalarCurve* comparison_out,
                                         MeanCurve* mean_out) {
    prob.validate_structure();
    const std::size_t dim = prob.dimension();
    std::vector<ModeIndex> indices;
    for (const auto& [p, fam] : prob.families) indices.push_back(p);

    // LV(phi, p) <= phi_model(V(phi(0), p), V-window) on random segments
    RngStream rng(mc.seed, 0, StreamRole::sampling);
    double worst = -std::numeric_limits<double>::infinity();
    std::string worst_sample;
    const std::size_t lags = grid_steps(prob.tau, mc.h, "delay");
    for (std::size_t s = 0; s < 1000; ++s) {
        const double scale = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
        // per-mode weights so that single modes dominate some samples
        std::vector<double> weight(dim);
        for (auto& w : weight) w = std::pow(10.0, -3.0 * rng.uniform());
        HistorySegment phi(prob.tau, mc.h, FieldState(dim));
        for (std::size_t j = 0; j <= lags; ++j) {
            FieldState x(dim);
            for (std::size_t k = 0; k < dim; ++k) x[k] = scale * weight[k] * rng.normal();
            phi.push(std::move(x));
        }
        for (ModeIndex p : indices) {
            ScalarHistory vwin(prob.tau, mc.h, 0.0);
            for (std::size_t j = 0; j <= lags; ++j) vwin.push(spec.V.value(phi.sample(j), p));
            const double lv = eval_generator(spec, prob, phi, p);
            const double rhs = model.phi(vwin.latest(), vwin);
            const double excess = (lv - rhs) / std::max({1.0, std::abs(lv), std::abs(rhs)});
            if (excess > worst) {
                worst = excess;
                std::ostringstream tag;
                tag << "segment " << s << " index " << p << " scale " << scale << " LV=" << lv
                    << " bound=" << rhs;
                worst_sample = tag.str();
            }
        }
    }
    if (worst > 1e-9) {
        throw HypothesisViolation(worst_sample, worst, "generator exceeds the comparison right side: " + worst_sample);
    }

    const HistorySegment xi_seg = initial_segment(prob.xi, prob.tau, mc.h);
    for (std::size_t j = 0; j <= lags; ++j) {
        const double theta = -prob.tau + static_cast<double>(j) * mc.h;
        const double bound = model.psi(theta);
        for (ModeIndex p : indices) {
            const double v = spec.V.value(xi_seg.sample(j), p);
            if (v > bound + 1e-12 * std::max(1.0, std::abs(bound))) {
                std::ostringstream tag;
                tag << "theta " << theta << " index " << p << " V=" << v << " psi=" << bound;
                throw HypothesisViolation(tag.str(), v - bound, "initial history exceeds psi: " + tag.str());
            }
        }
    }

    const ScalarCurve ubar = solve_comparison_ode(model, mc.T, mc.h);

    EnsembleOptions opts;
    opts.trajectories = mc.trajectories;
    opts.master_seed = mc.seed;
    opts.first_trajectory = mc.first_trajectory;
    opts.workers = mc.workers;
    const std::vector<Trajectory> paths = simulate_ensemble(prob, sig, mc.T, mc.h, opts);

    CertificateReport report("comparison");
    MeanCurve curve;
    std::vector<double> values(paths.size());
    for (std::size_t m = 0; m < ubar.values.size(); ++m) {
        for (std::size_t i = 0; i < paths.size(); ++i) {
            values[i] = spec.V.value(paths[i].states[m], paths[i].active[m]);
        }
        const MeanEstimate est = mean_and_error(values);
        const double t = ubar.times[m];
        curve.times.push_back(t);
        curve.estimate.push_back(est.estimate);
        curve.std_error.push_back(est.std_error);
        report.add(t, "E V(X(t))", est.estimate, ubar.values[m], est.std_error, 3.0 * est.std_error);
    }
    if (comparison_out) *comparison_out = ubar;
    if (mean_out) *mean_out = std::move(curve);
    return report;
}

ScalarCurve solve_reset_comparison(const std::function<double(double)>& decay,
                                   const std::vector<double>& reset_values,
                                   const std::vector<double>& reset_instants, double z0, double T,
                                   double h) {
    if (reset_values.size() != reset_instants.size()) {
        throw Error(ErrorKind::invalid_parameter, "one reset value per instant");
    }
    if (z0 < 0.0) throw Error(ErrorKind::domain, "comparison state must be non-negative");
    if (!(T > 0.0)) throw Error(ErrorKind::invalid_time, "horizon must be > 0");
    const std::size_t steps = grid_steps(T, h, "horizon");
    std::vector<std::pair<std::size_t, double>> resets;
    for (std::size_t i = 0; i < reset_instants.size(); ++i) {
        if (reset_values[i] < 0.0) throw Error(ErrorKind::domain, "reset values must be non-negative");
        if (reset_instants[i] > T + 1e-12 * std::max(1.0, T)) continue;
        resets.push_back({grid_steps(reset_instants[i], h, "reset instant"), reset_values[i]});
    }
    auto reset_at = [&](std::size_t m, double& z) {
        for (const auto& [step, value] : resets) {
            if (step == m) z = value;
        }
    };
    ScalarCurve curve;
    curve.h = h;
    double z = z0;
    reset_at(0, z);
    curve.times.push_back(0.0);
    curve.values.push_back(z);
    for (std::size_t m = 0; m < steps; ++m) {
        z = z - h * decay(z);
        reset_at(m + 1, z);
        if (!(z >= 0.0)) {
            std::ostringstream msg;
            msg << "comparison state became negative at t=" << static_cast<double>(m + 1) * h;
            throw Error(ErrorKind::domain, msg.str());
        }
        curve.times.push_back(static_cast<double>(m + 1) * h);
        curve.values.push_back(z);
    }
    return curve;
}

}  // namespace spdde
