#pragma once

#include "spdde/rng.hpp"
#include "spdde/spectral.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace spdde {

/// Trace-class covariance Q, diagonal in the operator eigenbasis.
class WienerModel {
public:
    explicit WienerModel(std::vector<double> q_eigenvalues);

    const std::vector<double>& q_eigenvalues() const noexcept { return q_eigenvalues_; }
    std::size_t dimension() const noexcept { return q_eigenvalues_.size(); }
    double trace() const noexcept { return trace_; }

private:
    std::vector<double> q_eigenvalues_;
    double trace_ = 0.0;
};

/// lambda_k = scale / k^2, k = 1..M.
WienerModel inverse_square_spectrum(std::size_t dimension, double scale = 1.0);

/// Finite mark space with atomic intensity measure lambda(du) = sum_i lambda_i delta_{u_i}.
/// An empty mark list is the jump-free model.
class JumpModel {
public:
    JumpModel() = default;
    JumpModel(std::vector<double> marks, std::vector<double> intensities);

    const std::vector<double>& marks() const noexcept { return marks_; }
    const std::vector<double>& intensities() const noexcept { return intensities_; }
    double total_intensity() const noexcept { return total_intensity_; }
    bool empty() const noexcept { return marks_.empty(); }

    /// sum_i lambda_i u_i^p, used by the closed-form hypothesis bounds.
    double mark_moment(int power) const;

private:
    std::vector<double> marks_;
    std::vector<double> intensities_;
    double total_intensity_ = 0.0;
};

struct JumpEvent {
    double time = 0.0;
    double mark = 0.0;
    std::size_t mark_index = 0;
};

/// L_p(x, y, u): jump coefficient of one subsystem.
using JumpCoefficient =
    std::function<FieldState(const FieldState& x, const FieldState& y, double mark)>;

/// Mode k ~ N(0, lambda_k dt), independent across modes. Draws M normals from `rng`.
FieldState sample_wiener_increment(const WienerModel& w, double dt, RngStream& rng);

/// Poisson(Lambda dt) events on [t0, t0 + dt), sorted by time; each mark drawn
/// with probability lambda_i / Lambda. Count, times and marks come from the three
/// jump streams of `streams`.
std::vector<JumpEvent> sample_jumps(const JumpModel& j, double t0, double dt,
                                    TrajectoryStreams& streams);

/// Compensator sum_i lambda_i L(x, y, u_i) per unit time.
FieldState compensator_drift(const JumpModel& j, const JumpCoefficient& jump,
                             const FieldState& x, const FieldState& y);

}  // namespace spdde
