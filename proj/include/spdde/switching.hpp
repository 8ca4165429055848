#pragma once

#include "spdde/rng.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spdde {

using ModeIndex = int;

struct SwitchEvent {
    double time = 0.0;
    ModeIndex index = 0;
};

/// Average dwell-time tau_a and chatter bound N0.
struct AdtParameters {
    double tau_a = 0.0;
    double n0 = 1.0;
};

/// Piecewise-constant, right-continuous index map sigma: R+ -> S.
class SwitchingSignal {
public:
    explicit SwitchingSignal(ModeIndex p0, std::vector<SwitchEvent> switches = {},
                             std::optional<AdtParameters> adt = std::nullopt);

    ModeIndex initial_index() const noexcept { return p0_; }
    const std::vector<SwitchEvent>& switches() const noexcept { return switches_; }
    std::vector<double> instants() const;
    const std::optional<AdtParameters>& adt() const noexcept { return adt_; }

    ModeIndex index_at(double t) const;
    /// Number of switch instants in [t1, t2).
    std::size_t switch_count(double t1, double t2) const;

private:
    ModeIndex p0_;
    std::vector<SwitchEvent> switches_;
    std::optional<AdtParameters> adt_;
};

/// Window [t1, t2] (instant to instant, both included) whose switch count
/// exceeds N0 + (t2 - t1) / tau_a.
struct AdtWindow {
    double t1 = 0.0;
    double t2 = 0.0;
    std::size_t count = 0;
    double allowed = 0.0;
};

struct AdtVerdict {
    bool holds = true;
    std::optional<AdtWindow> first_violation;
};

/// Checks N(t1, t2) <= N0 + (t2 - t1) / tau_a over all windows.
///
/// The worst windows start at a switch instant and end just past one, so the
/// check runs over instant pairs (i <= j) with count j - i + 1 and length
/// tau_j - tau_i. A relative slack of 1e-9 absorbs rounding on grid-snapped instants.
AdtVerdict verify_adt(const SwitchingSignal& sig, double tau_a, double n0);

/// Random signal satisfying the ADT bound up to `horizon`.
///
/// Gaps are exponential with mean tau_a; a candidate switch that would break the
/// budget is postponed to the earliest admissible time, then snapped up to the
/// integrator grid (grid_step <= 0 disables snapping). New indices are uniform
/// among those different from the current one.
SwitchingSignal generate_adt_signal(const std::vector<ModeIndex>& index_set, double tau_a, double n0,
                                    double horizon, double grid_step, RngStream& rng);

/// Consecutive activation times (tau_i, tau_j) of index p on [0, horizon]; time 0
/// counts as an activation of p0.
std::vector<std::pair<double, double>> fixed_index_pairs(const SwitchingSignal& sig, ModeIndex p,
                                                         double horizon);

nlohmann::json signal_to_json(const SwitchingSignal& sig);
SwitchingSignal signal_from_json(const nlohmann::json& j);

}  // namespace spdde
