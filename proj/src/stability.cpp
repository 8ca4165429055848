#include "spdde/stability.hpp"

#include "spdde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace spdde {

LyapunovFunction quadratic_lyapunov(LyapunovWeights weights) {
    if (weights.empty()) throw Error(ErrorKind::invalid_parameter, "lyapunov weights are empty");
    for (const auto& [p, w] : weights) {
        for (double v : w) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw Error(ErrorKind::invalid_parameter, "lyapunov weights must be positive");
            }
        }
    }
    auto shared = std::make_shared<const LyapunovWeights>(std::move(weights));
    auto lookup = [shared](ModeIndex p, std::size_t dim) -> const std::vector<double>& {
        auto it = shared->find(p);
        if (it == shared->end()) throw Error(ErrorKind::invalid_parameter, "no lyapunov weights for index");
        if (it->second.size() != dim) throw Error(ErrorKind::invalid_dimension, "lyapunov weight dimension");
        return it->second;
    };
    LyapunovFunction V;
    V.value = [lookup](const FieldState& x, ModeIndex p) {
        const auto& w = lookup(p, x.size());
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * x[k] * x[k];
        return s;
    };
    V.gradient = [lookup](const FieldState& x, ModeIndex p) {
        const auto& w = lookup(p, x.size());
        FieldState g(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) g[k] = 2.0 * w[k] * x[k];
        return g;
    };
    V.hessian_diagonal = [lookup](const FieldState& x, ModeIndex p) {
        const auto& w = lookup(p, x.size());
        FieldState hd(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) hd[k] = 2.0 * w[k];
        return hd;
    };
    return V;
}

double mode_comparability(const LyapunovWeights& weights) {
    double mu = 1.0;
    for (const auto& [p, wp] : weights) {
        for (const auto& [q, wq] : weights) {
            if (wp.size() != wq.size()) throw Error(ErrorKind::invalid_dimension, "lyapunov weight dimension");
            for (std::size_t k = 0; k < wp.size(); ++k) mu = std::max(mu, wp[k] / wq[k]);
        }
    }
    return mu;
}

ClassKFunction linear_class_k(double slope) {
    if (!(slope > 0.0)) throw Error(ErrorKind::invalid_parameter, "class-K slope must be > 0");
    std::ostringstream label;
    label << slope << "*r";
    return {[slope](double r) { return slope * r; }, [slope](double v) { return v / slope; }, label.str()};
}

ClassKFunction power_class_k(double coefficient, double power) {
    if (!(coefficient > 0.0) || !(power > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "class-K coefficient and power must be > 0");
    }
    std::ostringstream label;
    label << coefficient << "*r^" << power;
    return {[coefficient, power](double r) { return coefficient * std::pow(r, power); },
            [coefficient, power](double v) { return std::pow(v / coefficient, 1.0 / power); },
            label.str()};
}

bool is_class_k(const ClassKFunction& f, double upper, std::size_t samples) {
    if (f(0.0) != 0.0) return false;
    double prev = 0.0;
    const double lower = upper * 1e-12;
    for (std::size_t i = 0; i < samples; ++i) {
        const double r = lower * std::pow(upper / lower, static_cast<double>(i) / static_cast<double>(samples - 1));
        const double v = f(r);
        if (!(v > prev)) return false;
        prev = v;
    }
    return true;
}

SegmentMeasure head_power_measure(double q) {
    if (!(q > 0.0)) throw Error(ErrorKind::invalid_parameter, "measure power must be > 0");
    return [q](const HistorySegment& phi) {
        const double sq = norm_squared(phi.latest());
        return q == 2.0 ? sq : std::pow(sq, q / 2.0);
    };
}

SegmentMeasure sup_power_measure(double q) {
    if (!(q > 0.0)) throw Error(ErrorKind::invalid_parameter, "measure power must be > 0");
    return [q](const HistorySegment& phi) {
        double best = 0.0;
        for (std::size_t j = 0; j < phi.size(); ++j) best = std::max(best, norm_squared(phi.sample(j)));
        return q == 2.0 ? best : std::pow(best, q / 2.0);
    };
}

double eval_generator(const LyapunovSpec& spec, const SPDDEProblem& prob, const HistorySegment& phi,
                      ModeIndex p) {
    const CoefficientFamily& fam = prob.family(p);
    const FieldState& x = phi.latest();
    const FieldState& y = phi.value_at(-prob.tau);
    const FieldState grad = spec.V.gradient(x, p);

    double total = inner(grad, prob.op.apply(x) + fam.drift(x, y));

    const FieldState hess = spec.V.hessian_diagonal(x, p);
    const FieldState gain = fam.diffusion(x, y);
    const auto& lam = prob.wiener.q_eigenvalues();
    double trace = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) trace += hess[k] * gain[k] * gain[k] * lam[k];
    total += 0.5 * trace;

    if (!prob.jumps.empty()) {
        const double vx = spec.V.value(x, p);
        const auto& marks = prob.jumps.marks();
        const auto& rates = prob.jumps.intensities();
        for (std::size_t i = 0; i < marks.size(); ++i) {
            const FieldState L = fam.jump(x, y, marks[i]);
            total += rates[i] * (spec.V.value(x + L, p) - vx - inner(grad, L));
        }
    }
    return total;
}

MeanEstimate mean_and_error(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorKind::invalid_sample, "no samples");
    const double first = values.front();
    if (std::all_of(values.begin(), values.end(), [first](double v) { return v == first; })) {
        return {first, 0.0};
    }
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

MeanEstimate estimate_mean_measure(std::span<const Trajectory> trajectories,
                                   const SegmentMeasure& measure, double t) {
    if (trajectories.empty()) throw Error(ErrorKind::invalid_sample, "no trajectories");
    const std::size_t m = trajectories.front().grid_index(t);
    std::vector<double> values;
    values.reserve(trajectories.size());
    for (const Trajectory& tr : trajectories) values.push_back(measure(tr.segment_at(m)));
    return mean_and_error(values);
}

MeanCurve mean_measure_curve(std::span<const Trajectory> trajectories, const SegmentMeasure& measure) {
    if (trajectories.empty()) throw Error(ErrorKind::invalid_sample, "no trajectories");
    const Trajectory& ref = trajectories.front();
    MeanCurve curve;
    std::vector<double> values(trajectories.size());
    for (std::size_t m = 0; m < ref.states.size(); ++m) {
        for (std::size_t i = 0; i < trajectories.size(); ++i) {
            values[i] = measure(trajectories[i].segment_at(m));
        }
        const MeanEstimate est = mean_and_error(values);
        curve.times.push_back(ref.time(m));
        curve.estimate.push_back(est.estimate);
        curve.std_error.push_back(est.std_error);
    }
    return curve;
}

CertificateReport check_sandwich(const LyapunovSpec& spec, std::span<const HistorySegment> segments,
                                 std::span<const ModeIndex> indices) {
    CertificateReport report("sandwich");
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const HistorySegment& phi = segments[s];
        for (ModeIndex p : indices) {
            const double v = spec.V.value(phi.latest(), p);
            const double lower = spec.alpha1(spec.h(phi));
            const double upper = spec.alpha2(spec.h0(phi));
            const double tol = 1e-12 * std::max({1.0, std::abs(v), std::abs(upper)});
            const std::string tag = "segment " + std::to_string(s) + " index " + std::to_string(p);
            report.add(static_cast<double>(s), tag + " lower", lower, v, 0.0, tol);
            report.add(static_cast<double>(s), tag + " upper", v, upper, 0.0, tol);
        }
    }
    return report;
}

CertificateReport check_gasm(const MeanCurve& curve, const KlFunction& beta, double h0_of_xi) {
    CertificateReport report("gasm");
    for (std::size_t m = 0; m < curve.times.size(); ++m) {
        const double t = curve.times[m];
        report.add(t, "E h(X_t)", curve.estimate[m], beta(h0_of_xi, t), curve.std_error[m],
                   3.0 * curve.std_error[m]);
    }
    return report;
}

CertificateReport check_gasp(std::span<const Trajectory> trajectories, const SegmentMeasure& h,
                             const KlFunction& beta, double h0_of_xi, double eta) {
    if (!(eta > 0.0) || eta > 1.0) throw Error(ErrorKind::range, "eta must lie in (0, 1]");
    if (trajectories.empty()) throw Error(ErrorKind::invalid_sample, "no trajectories");
    std::ostringstream name;
    name << "gasp eta=" << eta;
    CertificateReport report(name.str());
    report.note("threshold is 2 beta / eta");
    const Trajectory& ref = trajectories.front();
    const double n = static_cast<double>(trajectories.size());
    for (std::size_t m = 0; m < ref.states.size(); ++m) {
        const double t = ref.time(m);
        const double threshold = 2.0 * beta(h0_of_xi, t) / eta;
        std::size_t hits = 0;
        for (const Trajectory& tr : trajectories) {
            if (h(tr.segment_at(m)) >= threshold) ++hits;
        }
        const double freq = static_cast<double>(hits) / n;
        report.add(t, "P[h >= threshold]", freq, eta, std::sqrt(freq * (1.0 - freq) / n), 0.0, true);
    }
    return report;
}

CertificateReport check_fixed_index_decrement(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                              const LyapunovSpec& spec, double n,
                                              const MonteCarloSettings& mc) {
    CertificateReport report("fixed-index");
    std::vector<std::pair<ModeIndex, std::pair<double, double>>> all_pairs;
    for (const auto& [p, fam] : prob.families) {
        for (const auto& pr : fixed_index_pairs(sig, p, mc.T)) all_pairs.push_back({p, pr});
    }
    if (all_pairs.empty()) {
        report.note("no pairs");
        return report;
    }
    EnsembleOptions opts;
    opts.trajectories = mc.trajectories;
    opts.master_seed = mc.seed;
    opts.first_trajectory = mc.first_trajectory;
    opts.workers = mc.workers;
    opts.yosida_n = n;
    const std::vector<Trajectory> paths = simulate_ensemble(prob, sig, mc.T, mc.h, opts);

    std::vector<double> d(paths.size());
    for (const auto& [p, pr] : all_pairs) {
        const std::size_t i = paths.front().grid_index(pr.first);
        const std::size_t j = paths.front().grid_index(pr.second);
        for (std::size_t r = 0; r < paths.size(); ++r) {
            const Trajectory& tr = paths[r];
            d[r] = spec.V.value(tr.states[j], p) - spec.V.value(tr.states[i], p) +
                   spec.U(spec.h0(tr.segment_at(i)));
        }
        const MeanEstimate est = mean_and_error(d);
        std::ostringstream label;
        label << "index " << p << " pair [" << pr.first << ", " << pr.second << "]";
        report.add(pr.second, label.str(), est.estimate, 0.0, est.std_error, 3.0 * est.std_error);
    }
    return report;
}

double KlFit::operator()(double r, double t) const { return c * r * std::exp(-lambda * t); }

KlFit fit_kl_envelope(std::span<const ScaledCurve> curves) {
    if (curves.size() < 2) throw Error(ErrorKind::fit, "need at least two initial scales");
    std::vector<double> ts, ys;
    for (const ScaledCurve& sc : curves) {
        if (!(sc.h0_of_xi > 0.0)) throw Error(ErrorKind::fit, "initial measure must be positive");
        if (sc.curve.times.size() != sc.curve.estimate.size()) throw Error(ErrorKind::fit, "ragged curve");
        for (std::size_t m = 0; m < sc.curve.times.size(); ++m) {
            const double v = sc.curve.estimate[m];
            if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::fit, "curve values must be positive");
            ts.push_back(sc.curve.times[m]);
            ys.push_back(std::log(v / sc.h0_of_xi));
        }
    }
    const double y0 = ys.front();
    const double n = static_cast<double>(ts.size());
    double tbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tbar += ts[i];
        ybar += ys[i] - y0;
    }
    tbar /= n;
    ybar /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxy += (ts[i] - tbar) * (ys[i] - y0 - ybar);
        sxx += (ts[i] - tbar) * (ts[i] - tbar);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::fit, "need at least two distinct times");
    const double slope = sxy / sxx;

    KlFit fit;
    fit.lambda = -slope;
    fit.c_fit = std::exp(y0 + ybar - slope * tbar);
    fit.is_kl = fit.lambda > 0.0;
    double lifted = 0.0;
    for (const ScaledCurve& sc : curves) {
        for (std::size_t m = 0; m < sc.curve.times.size(); ++m) {
            const double se = m < sc.curve.std_error.size() ? sc.curve.std_error[m] : 0.0;
            const double base = sc.h0_of_xi * std::exp(-fit.lambda * sc.curve.times[m]);
            lifted = std::max(lifted, (sc.curve.estimate[m] + 3.0 * se) / base);
        }
    }
    fit.c = lifted;
    return fit;
}

GeneratorBound quadratic_generator_bound(const SPDDEProblem& prob) {
    const auto& mu = prob.op.eigenvalues();
    const auto& s = prob.wiener.q_eigenvalues();
    double J = 0.0;
    for (std::size_t i = 0; i < prob.jumps.marks().size(); ++i) {
        J += prob.jumps.intensities()[i] * prob.jumps.marks()[i] * prob.jumps.marks()[i];
    }
    GeneratorBound out{-std::numeric_limits<double>::infinity(), 0.0};
    for (const auto& [p, fam] : prob.families) {
        if (!fam.linear) {
            throw Error(ErrorKind::invalid_parameter, "generator bound needs linear coefficient families");
        }
        const LinearCoefficients& c = *fam.linear;
        for (std::size_t k = 0; k < prob.dimension(); ++k) {
            const double cross = 2.0 * c.drift_y[k] + 2.0 * s[k] * c.diffusion_x[k] * c.diffusion_y[k] +
                                 2.0 * J * c.jump_x[k] * c.jump_y[k];
            const double alpha = 2.0 * (mu[k] + c.drift_x[k]) + s[k] * c.diffusion_x[k] * c.diffusion_x[k] +
                                 J * c.jump_x[k] * c.jump_x[k] + 0.5 * std::abs(cross);
            const double beta = s[k] * c.diffusion_y[k] * c.diffusion_y[k] + J * c.jump_y[k] * c.jump_y[k] +
                                0.5 * std::abs(cross);
            out.gamma1 = std::max(out.gamma1, alpha);
            out.gamma2 = std::max(out.gamma2, beta);
        }
    }
    return out;
}

GasmPipelineResult run_gasm_pipeline(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                     const LyapunovSpec& spec, const GasmPipelineSettings& settings) {
    const MonteCarloSettings& mc = settings.mc;
    auto ensemble = [&](const SPDDEProblem& pr, std::uint64_t first) {
        EnsembleOptions opts;
        opts.trajectories = mc.trajectories;
        opts.master_seed = mc.seed;
        opts.first_trajectory = first;
        opts.workers = mc.workers;
        return simulate_ensemble(pr, sig, mc.T, mc.h, opts);
    };
    auto h0_of = [&](const SPDDEProblem& pr) {
        return spec.h0(initial_segment(pr.xi, pr.tau, mc.h));
    };

    std::vector<ScaledCurve> training;
    for (std::size_t j = 0; j < settings.scales.size(); ++j) {
        SPDDEProblem scaled = prob;
        const double factor = settings.scales[j];
        scaled.xi = [xi = prob.xi, factor](double theta) { return factor * xi(theta); };
        const auto paths = ensemble(scaled, mc.first_trajectory + j * mc.trajectories);
        training.push_back({h0_of(scaled), mean_measure_curve(paths, spec.h)});
    }

    GasmPipelineResult result;
    result.fit = fit_kl_envelope(training);
    result.h0_of_xi = h0_of(prob);
    const auto fresh = ensemble(prob, mc.first_trajectory + settings.scales.size() * mc.trajectories);
    result.fresh_curve = mean_measure_curve(fresh, spec.h);
    const KlFit fit = result.fit;
    result.gasm = check_gasm(result.fresh_curve, fit, result.h0_of_xi);
    std::ostringstream envelope;
    envelope << "envelope c=" << fit.c << " lambda=" << fit.lambda;
    result.gasm.note(envelope.str());
    if (!fit.is_kl) {
        result.gasm.note("fitted rate is not positive, envelope is not of class KL");
        result.gasm.pass = false;
    }
    for (double eta : settings.etas) {
        result.gasp.push_back(check_gasp(fresh, spec.h, fit, result.h0_of_xi, eta));
        if (!fit.is_kl) result.gasp.back().pass = false;
    }
    return result;
}

}  // namespace spdde
