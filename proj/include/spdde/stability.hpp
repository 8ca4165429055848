#pragma once

#include "spdde/history.hpp"
#include "spdde/integrator.hpp"
#include "spdde/problem.hpp"
#include "spdde/report.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace spdde {

/// V(x, p) with gradient and diagonal Hessian oracles. The Hessian is taken to be
/// diagonal in the eigenbasis, which keeps tr(V_xx G Q G*) a finite sum.
struct LyapunovFunction {
    std::function<double(const FieldState&, ModeIndex)> value;
    std::function<FieldState(const FieldState&, ModeIndex)> gradient;
    std::function<FieldState(const FieldState&, ModeIndex)> hessian_diagonal;
};

using LyapunovWeights = std::map<ModeIndex, std::vector<double>>;

/// V(x, p) = sum_k w_{p,k} x_k^2.
LyapunovFunction quadratic_lyapunov(LyapunovWeights weights);

/// Smallest mu with V(x, p) <= mu V(x, q) for all p, q: max_{p,q,k} w_{p,k} / w_{q,k}.
double mode_comparability(const LyapunovWeights& weights);

struct ClassKFunction {
    std::function<double(double)> fn;
    std::function<double(double)> inverse;
    std::string label;

    double operator()(double r) const { return fn(r); }
};

ClassKFunction linear_class_k(double slope);
/// c r^power.
ClassKFunction power_class_k(double coefficient, double power);

/// Sampled check: value 0 at 0 and strictly increasing on a log grid over (0, upper].
bool is_class_k(const ClassKFunction& f, double upper = 1e6, std::size_t samples = 400);

using SegmentMeasure = std::function<double(const HistorySegment&)>;

/// ||phi(0)||^q.
SegmentMeasure head_power_measure(double q);
/// ||phi||_D^q = max over samples of ||phi(theta)||^q.
SegmentMeasure sup_power_measure(double q);

struct LyapunovSpec {
    LyapunovFunction V;
    ClassKFunction alpha1 = linear_class_k(1.0);
    ClassKFunction alpha2 = linear_class_k(1.0);
    SegmentMeasure h0 = head_power_measure(2.0);
    SegmentMeasure h = head_power_measure(2.0);
    double mu = 1.0;
    ClassKFunction U = linear_class_k(1.0);
    ClassKFunction rho = linear_class_k(1.0);
    double q = 2.0;
    ClassKFunction decay_rate = linear_class_k(1.0);
};

/// (LV)(phi, p): drift, half diffusion trace and the compensated jump bracket.
double eval_generator(const LyapunovSpec& spec, const SPDDEProblem& prob, const HistorySegment& phi,
                      ModeIndex p);

struct MeanEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Sample mean and standard error (N - 1 denominator). Identical values give (value, 0) exactly.
MeanEstimate mean_and_error(std::span<const double> values);

/// Mean of measure(X_t) over the ensemble; t must be on the common grid.
MeanEstimate estimate_mean_measure(std::span<const Trajectory> trajectories,
                                   const SegmentMeasure& measure, double t);

struct MeanCurve {
    std::vector<double> times;
    std::vector<double> estimate;
    std::vector<double> std_error;
};

MeanCurve mean_measure_curve(std::span<const Trajectory> trajectories, const SegmentMeasure& measure);

/// alpha1(h(phi)) <= V(phi(0), p) <= alpha2(h0(phi)) for every segment and index.
CertificateReport check_sandwich(const LyapunovSpec& spec, std::span<const HistorySegment> segments,
                                 std::span<const ModeIndex> indices);

using KlFunction = std::function<double(double r, double t)>;

/// E h(X_t) <= beta(h0(xi), t) + 3 SE(t) at every grid time.
CertificateReport check_gasm(const MeanCurve& curve, const KlFunction& beta, double h0_of_xi);

/// Frequency of {h(X_t) >= 2 beta(h0(xi), t) / eta} stays below eta at every grid time.
CertificateReport check_gasp(std::span<const Trajectory> trajectories, const SegmentMeasure& h,
                             const KlFunction& beta, double h0_of_xi, double eta);

struct MonteCarloSettings {
    double T = 5.0;
    double h = 0.05;
    std::size_t trajectories = 2000;
    std::uint64_t seed = 0;
    std::uint64_t first_trajectory = 0;
    unsigned workers = 1;
};

/// For every index p and consecutive activation pair (tau_i, tau_j) of p:
///   E[V(X^n(tau_j), p) - V(X^n(tau_i), p) + U(h0(X^n_{tau_i}))] <= 3 SE.
CertificateReport check_fixed_index_decrement(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                              const LyapunovSpec& spec, double n,
                                              const MonteCarloSettings& mc);

struct ScaledCurve {
    double h0_of_xi = 1.0;
    MeanCurve curve;
};

/// beta(r, t) = c r e^{-lambda t}.
struct KlFit {
    double c_fit = 0.0;   ///< least-squares intercept
    double c = 0.0;       ///< intercept lifted so the envelope covers every point plus 3 SE
    double lambda = 0.0;
    bool is_kl = false;   ///< false when lambda <= 0

    double operator()(double r, double t) const;
};

/// Pooled least squares of log(curve / h0) against t; throws fit on non-positive data.
KlFit fit_kl_envelope(std::span<const ScaledCurve> curves);

/// gamma1, gamma2 with LV(x, y, p) <= gamma1 V(x, p) + gamma2 V(y, p) for linear
/// families and quadratic V (per-mode Young bound on the cross terms).
struct GeneratorBound {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

GeneratorBound quadratic_generator_bound(const SPDDEProblem& prob);

struct GasmPipelineSettings {
    MonteCarloSettings mc;
    std::vector<double> scales{0.5, 1.0, 2.0};
    std::vector<double> etas{0.5, 0.1, 0.05};
};

struct GasmPipelineResult {
    KlFit fit;
    double h0_of_xi = 0.0;
    MeanCurve fresh_curve;
    CertificateReport gasm;
    std::vector<CertificateReport> gasp;
};

/// Fits the envelope on training ensembles (xi scaled by each factor), then checks
/// GAS-M and GAS-P on a fresh ensemble with unscaled xi.
GasmPipelineResult run_gasm_pipeline(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                     const LyapunovSpec& spec, const GasmPipelineSettings& settings);

}  // namespace spdde
