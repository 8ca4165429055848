#include "spdde/integrator.hpp"

#include "spdde/error.hpp"
#include "spdde/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace spdde {

std::vector<double> Trajectory::times() const {
    std::vector<double> out(states.size());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = time(m);
    return out;
}

const FieldState& Trajectory::lagged(std::size_t m, std::size_t j) const {
    if (j > delay_steps || m >= states.size()) throw Error(ErrorKind::range, "lag outside the stored path");
    if (m >= j) return states[m - j];
    // prefix[i] sits at offset -tau + i h
    return prefix[delay_steps - (j - m)];
}

HistorySegment Trajectory::segment_at(std::size_t m) const {
    const double tau = static_cast<double>(delay_steps) * h;
    HistorySegment seg(tau, h, lagged(m, delay_steps));
    for (std::size_t i = 1; i <= delay_steps; ++i) seg.push(lagged(m, delay_steps - i));
    return seg;
}

std::size_t Trajectory::grid_index(double t) const {
    const double pos = t / h;
    const double m_real = std::round(pos);
    if (!(t >= 0.0) || std::abs(pos - m_real) > 1e-9 * std::max(1.0, pos)) {
        throw Error(ErrorKind::range, "time is not on the trajectory grid");
    }
    const auto m = static_cast<std::size_t>(m_real);
    if (m >= states.size()) throw Error(ErrorKind::range, "time beyond the trajectory horizon");
    return m;
}

std::vector<ModeIndex> active_index_per_step(const SwitchingSignal& sig, std::size_t steps, double h) {
    std::vector<ModeIndex> active(steps + 1, sig.initial_index());
    const double T = static_cast<double>(steps) * h;
    std::size_t from = 0;
    ModeIndex current = sig.initial_index();
    for (const SwitchEvent& ev : sig.switches()) {
        if (ev.time > T + 1e-12 * std::max(1.0, T)) break;
        const std::size_t m = grid_steps(ev.time, h, "switch instant");
        for (std::size_t i = from; i < m && i <= steps; ++i) active[i] = current;
        from = m;
        current = ev.index;
    }
    for (std::size_t i = from; i <= steps; ++i) active[i] = current;
    return active;
}

namespace {

Trajectory integrate(const SPDDEProblem& prob, const SwitchingSignal& sig, std::optional<double> n,
                     double T, double h, TrajectoryStreams& rng) {
    prob.validate_structure();
    if (!(h > 0.0) || !(T > 0.0)) throw Error(ErrorKind::invalid_step, "T and h must be positive");
    const std::size_t lags = grid_steps(prob.tau, h, "delay");
    const std::size_t steps = grid_steps(T, h, "horizon");
    if (n && !(*n > 0.0)) throw Error(ErrorKind::invalid_parameter, "yosida n must be > 0");

    const std::vector<double> decay = prob.op.semigroup_factors(h);
    std::vector<double> resolvent;
    if (n) resolvent = prob.op.yosida_factors(*n);
    auto smooth = [&](FieldState x) { return n ? hadamard(x, resolvent) : x; };

    Trajectory traj;
    traj.h = h;
    traj.delay_steps = lags;
    traj.active = active_index_per_step(sig, steps, h);
    traj.prefix.reserve(lags);
    for (std::size_t i = 0; i < lags; ++i) {
        traj.prefix.push_back(smooth(prob.xi(-prob.tau + static_cast<double>(i) * h)));
    }
    traj.states.reserve(steps + 1);
    traj.states.push_back(smooth(prob.xi(0.0)));

    const std::size_t M = prob.dimension();
    for (std::size_t m = 0; m < steps; ++m) {
        const CoefficientFamily& fam = prob.family(traj.active[m]);
        const FieldState& x = traj.states[m];
        const FieldState& y = traj.lagged(m, lags);

        FieldState incr = h * fam.drift(x, y);
        const FieldState dw = sample_wiener_increment(prob.wiener, h, rng.wiener);
        const FieldState gain = fam.diffusion(x, y);
        for (std::size_t k = 0; k < M; ++k) incr[k] += gain[k] * dw[k];
        if (!prob.jumps.empty()) {
            for (const JumpEvent& ev : sample_jumps(prob.jumps, traj.time(m), h, rng)) {
                incr += fam.jump(x, y, ev.mark);
            }
            incr -= h * compensator_drift(prob.jumps, fam.jump, x, y);
        }
        FieldState next = x + smooth(std::move(incr));
        for (std::size_t k = 0; k < M; ++k) next[k] *= decay[k];
        traj.states.push_back(std::move(next));
    }
    return traj;
}

}  // namespace

Trajectory integrate_mild(const SPDDEProblem& prob, const SwitchingSignal& sig, double T, double h,
                          TrajectoryStreams& rng) {
    return integrate(prob, sig, std::nullopt, T, h, rng);
}

Trajectory integrate_yosida(const SPDDEProblem& prob, const SwitchingSignal& sig, double n, double T,
                            double h, TrajectoryStreams& rng) {
    return integrate(prob, sig, n, T, h, rng);
}

std::vector<Trajectory> simulate_ensemble(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                          double T, double h, const EnsembleOptions& opts) {
    if (opts.trajectories == 0) throw Error(ErrorKind::invalid_sample, "need at least one trajectory");
    std::vector<Trajectory> out(opts.trajectories);
    parallel_for(opts.trajectories, opts.workers, [&](std::size_t i) {
        TrajectoryStreams rng(opts.master_seed, opts.first_trajectory + i);
        out[i] = opts.yosida_n ? integrate_yosida(prob, sig, *opts.yosida_n, T, h, rng)
                               : integrate_mild(prob, sig, T, h, rng);
    });
    return out;
}

std::vector<double> yosida_gap_ladder(const SPDDEProblem& prob, const SwitchingSignal& sig,
                                      std::span<const double> ladder, double T, double h,
                                      std::size_t trajectories, std::uint64_t master_seed,
                                      unsigned workers) {
    if (trajectories == 0) throw Error(ErrorKind::invalid_sample, "need at least one trajectory");
    const std::size_t steps = grid_steps(T, h, "horizon");
    // sq[i][r][m]: squared gap of trajectory i for ladder rung r at grid time m
    std::vector<std::vector<std::vector<double>>> sq(trajectories);
    parallel_for(trajectories, workers, [&](std::size_t i) {
        TrajectoryStreams base(master_seed, i);
        TrajectoryStreams mild_rng = base;
        const Trajectory mild = integrate_mild(prob, sig, T, h, mild_rng);
        sq[i].resize(ladder.size());
        for (std::size_t r = 0; r < ladder.size(); ++r) {
            TrajectoryStreams rng = base;
            const Trajectory approx = integrate_yosida(prob, sig, ladder[r], T, h, rng);
            sq[i][r].resize(steps + 1);
            for (std::size_t m = 0; m <= steps; ++m) {
                sq[i][r][m] = norm_squared(approx.states[m] - mild.states[m]);
            }
        }
    });
    std::vector<double> gaps(ladder.size(), 0.0);
    for (std::size_t r = 0; r < ladder.size(); ++r) {
        for (std::size_t m = 0; m <= steps; ++m) {
            double sum = 0.0;
            for (std::size_t i = 0; i < trajectories; ++i) sum += sq[i][r][m];
            gaps[r] = std::max(gaps[r], sum / static_cast<double>(trajectories));
        }
    }
    return gaps;
}

double yosida_gap(const SPDDEProblem& prob, const SwitchingSignal& sig, double n, double T, double h,
                  std::size_t trajectories, std::uint64_t master_seed, unsigned workers) {
    const double ladder[] = {n};
    return yosida_gap_ladder(prob, sig, ladder, T, h, trajectories, master_seed, workers).front();
}

}  // namespace spdde
