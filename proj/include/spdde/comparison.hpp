#pragma once

#include "spdde/history.hpp"
#include "spdde/report.hpp"
#include "spdde/stability.hpp"

#include <functional>
#include <vector>

namespace spdde {

/// Scalar path on the grid t_m = m h.
struct ScalarCurve {
    double h = 0.0;
    std::vector<double> times;
    std::vector<double> values;

    double at(double t) const;
};

/// u' = phi(u, u_t) with initial history psi on [-tau, 0]. phi receives the
/// current window u_t, whose latest sample is u.
struct ComparisonModel {
    std::function<double(double u, const ScalarHistory& window)> phi;
    std::function<double(double theta)> psi;
    double tau = 1.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double mu = 1.0;
    double lambda = 0.0;
};

/// phi(u, window) = gamma1 u + gamma2 max(window).
ComparisonModel halanay_model(double gamma1, double gamma2, double tau,
                              std::function<double(double)> psi);

/// Largest sample of the window.
double window_sup(const ScalarHistory& window);

/// Explicit Euler with step-function history. |u| > 1e15 throws maximal-interval.
ScalarCurve solve_comparison_ode(const ComparisonModel& model, double T, double h);

/// Root of lambda + a1 + a2 e^{lambda tau} = 0 on (0, inf).
double halanay_lambda(double a1, double a2, double tau);

/// Integrates u' = a1 u + a2 sup u_t from history 1 and checks
/// u(t) <= ||u_0||_D e^{-lambda t} (1 + 1e-6) + h.
CertificateReport verify_halanay_bound(double a1, double a2, double tau, double lambda, double T,
                                       double h);

/// Between instants xi' = gamma1 xi + gamma2 sup xi_t; at each instant xi -> mu xi.
/// History is constant u0 on [-tau, 0].
ScalarCurve solve_impulsive_comparison(double gamma1, double gamma2, double mu,
                                       const std::vector<double>& reset_instants, double u0, double T,
                                       double h, double tau);

/// xi0 mu^nu e^{-lambda (T - t0)}, nu = number of resets in [t0, T).
double dwell_envelope(double xi0, double mu, double lambda, const std::vector<double>& reset_instants,
                      double t0, double T);

/// ln mu / lambda.
double dwell_time_threshold(double mu, double lambda);

/// E V(X(t), sigma(t)) <= u_bar(t, psi) + 3 SE(t) along mild trajectories.
/// Before simulating, samples random segments and requires
/// LV(phi, p) <= model.phi(V(phi(0), p), V-window of phi); failure throws
/// hypothesis-violated naming the worst sample.
CertificateReport comparison_certificate(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                         const LyapunovSpec& spec, const ComparisonModel& model,
                                         const MonteCarloSettings& mc, ScalarCurve* comparison_out = nullptr,
                                         MeanCurve* mean_out = nullptr);

/// zeta' = -decay(zeta) between instants; zeta(tau_i) = reset_values[i].
ScalarCurve solve_reset_comparison(const std::function<double(double)>& decay,
                                   const std::vector<double>& reset_values,
                                   const std::vector<double>& reset_instants, double z0, double T,
                                   double h);

}  // namespace spdde
