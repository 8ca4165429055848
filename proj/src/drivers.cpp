#include "spdde/drivers.hpp"

#include "spdde/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spdde {

WienerModel::WienerModel(std::vector<double> q_eigenvalues)
    : q_eigenvalues_(std::move(q_eigenvalues)) {
    if (q_eigenvalues_.empty()) {
        throw Error(ErrorKind::invalid_dimension, "Wiener model needs at least one mode");
    }
    for (double lambda : q_eigenvalues_) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw Error(ErrorKind::invalid_parameter, "Q eigenvalues must be finite and > 0");
        }
        trace_ += lambda;
    }
}

WienerModel inverse_square_spectrum(std::size_t dimension, double scale) {
    if (dimension == 0) throw Error(ErrorKind::invalid_dimension, "Q spectrum needs M >= 1");
    std::vector<double> q(dimension);
    for (std::size_t k = 0; k < dimension; ++k) {
        const double index = static_cast<double>(k + 1);
        q[k] = scale / (index * index);
    }
    return WienerModel(std::move(q));
}

JumpModel::JumpModel(std::vector<double> marks, std::vector<double> intensities)
    : marks_(std::move(marks)), intensities_(std::move(intensities)) {
    if (marks_.size() != intensities_.size()) {
        throw Error(ErrorKind::invalid_parameter, "marks and intensities differ in length");
    }
    std::set<double> seen;
    for (std::size_t i = 0; i < marks_.size(); ++i) {
        if (!std::isfinite(marks_[i])) throw Error(ErrorKind::invalid_parameter, "mark must be finite");
        if (!seen.insert(marks_[i]).second) {
            throw Error(ErrorKind::invalid_parameter, "marks must be distinct");
        }
        if (!(intensities_[i] > 0.0) || !std::isfinite(intensities_[i])) {
            throw Error(ErrorKind::invalid_parameter, "jump intensities must be finite and > 0");
        }
        total_intensity_ += intensities_[i];
    }
}

double JumpModel::mark_moment(int power) const {
    double s = 0.0;
    for (std::size_t i = 0; i < marks_.size(); ++i) {
        s += intensities_[i] * std::pow(marks_[i], power);
    }
    return s;
}

FieldState sample_wiener_increment(const WienerModel& w, double dt, RngStream& rng) {
    if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "Wiener increment needs dt > 0");
    const auto& q = w.q_eigenvalues();
    FieldState dW(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) dW[k] = std::sqrt(q[k] * dt) * rng.normal();
    return dW;
}

std::vector<JumpEvent> sample_jumps(const JumpModel& j, double t0, double dt,
                                    TrajectoryStreams& streams) {
    if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "jump sampling needs dt > 0");
    std::vector<JumpEvent> events;
    if (j.empty()) return events;

    const std::uint64_t count = streams.jump_count.poisson(j.total_intensity() * dt);
    events.reserve(count);
    const auto& marks = j.marks();
    const auto& rates = j.intensities();
    for (std::uint64_t e = 0; e < count; ++e) {
        JumpEvent ev;
        ev.time = t0 + dt * streams.jump_time.uniform();
        const double target = streams.jump_mark.uniform() * j.total_intensity();
        double acc = 0.0;
        std::size_t i = 0;
        for (; i + 1 < rates.size(); ++i) {
            acc += rates[i];
            if (target < acc) break;
        }
        ev.mark_index = i;
        ev.mark = marks[i];
        events.push_back(ev);
    }
    std::sort(events.begin(), events.end(),
              [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    return events;
}

FieldState compensator_drift(const JumpModel& j, const JumpCoefficient& jump,
                             const FieldState& x, const FieldState& y) {
    FieldState out(x.size());
    if (!jump) return out;
    for (std::size_t i = 0; i < j.marks().size(); ++i) {
        FieldState term = jump(x, y, j.marks()[i]);
        term *= j.intensities()[i];
        out += term;
    }
    return out;
}

}  // namespace spdde
