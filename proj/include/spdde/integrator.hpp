#pragma once

#include "spdde/history.hpp"
#include "spdde/problem.hpp"
#include "spdde/rng.hpp"
#include "spdde/switching.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace spdde {

/// Sampled path on the grid t_m = m h, m = 0..T/h.
///
/// `prefix` holds the initial segment at offsets -tau, ..., -h so that any
/// history window X_{t_m} can be rebuilt from prefix + states.
struct Trajectory {
    double h = 0.0;
    std::size_t delay_steps = 0;
    std::vector<FieldState> prefix;
    std::vector<FieldState> states;
    std::vector<ModeIndex> active;

    std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
    double time(std::size_t m) const noexcept { return static_cast<double>(m) * h; }
    std::vector<double> times() const;

    /// X(t_m + theta) for theta = -j h, j <= delay_steps.
    const FieldState& lagged(std::size_t m, std::size_t j) const;
    /// History window X_{t_m} as a segment on the same grid.
    HistorySegment segment_at(std::size_t m) const;
    /// Grid index of time t; throws range if t is off the grid or past the horizon.
    std::size_t grid_index(double t) const;
};

/// Exponential-Euler step of the mild form:
///   X_{m+1} = T(h) [X_m + h F + G dW + sum_jumps L(u) - h sum_i lambda_i L(u_i)]
/// with all coefficients evaluated at (X_m, X(t_m - tau)) for the index active on [t_m, t_{m+1}).
Trajectory integrate_mild(const SPDDEProblem& prob, const SwitchingSignal& sig, double T, double h,
                          TrajectoryStreams& rng);

/// Same stepping with the increment and the initial segment pre-composed with
/// R(n) = n R(n, A). Consumes exactly the draws integrate_mild consumes, so both
/// schemes share noise when handed copies of the same streams.
Trajectory integrate_yosida(const SPDDEProblem& prob, const SwitchingSignal& sig, double n, double T,
                            double h, TrajectoryStreams& rng);

struct EnsembleOptions {
    std::size_t trajectories = 1;
    std::uint64_t master_seed = 0;
    std::uint64_t first_trajectory = 0;  ///< stream ids are first_trajectory + i
    unsigned workers = 1;
    std::optional<double> yosida_n;      ///< integrate the approximating system instead
};

std::vector<Trajectory> simulate_ensemble(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                          double T, double h, const EnsembleOptions& opts);

/// Pathwise-coupled gap max_m E ||X^n(t_m) - X(t_m)||^2 for each n in `ladder`.
std::vector<double> yosida_gap_ladder(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                      std::span<const double> ladder, double T, double h,
                                      std::size_t trajectories, std::uint64_t master_seed,
                                      unsigned workers = 1);

double yosida_gap(const SPDDEProblem& prob, const SwitchingSignal& sig, double n, double T, double h,
                  std::size_t trajectories, std::uint64_t master_seed, unsigned workers = 1);

/// Grid index of every switch instant; throws grid-mismatch if one is off-grid.
std::vector<ModeIndex> active_index_per_step(const SwitchingSignal& sig, std::size_t steps, double h);

}  // namespace spdde
