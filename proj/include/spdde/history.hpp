#pragma once

#include "spdde/error.hpp"
#include "spdde/spectral.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace spdde {

/// Number of grid steps in `length` when it is an integer multiple of `step`;
/// throws grid-mismatch otherwise.
inline std::size_t grid_steps(double length, double step, const char* what) {
    if (!(step > 0.0) || !(length >= 0.0)) {
        throw Error(ErrorKind::grid_mismatch, std::string(what) + ": step and length must be positive");
    }
    const double ratio = length / step;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw Error(ErrorKind::grid_mismatch, std::string(what) + ": length is not a multiple of the step");
    }
    return static_cast<std::size_t>(rounded);
}

inline double value_norm(double v) { return std::abs(v); }
inline double value_norm(const FieldState& v) { return norm(v); }

/// Sampled window {x(t + theta) : -tau <= theta <= 0} on a grid of step h.
///
/// Holds tau / h + 1 samples at offsets -tau, -tau + h, ..., 0 in a ring.
/// Lookups are right-continuous step functions: value_at(theta) returns the
/// sample at the largest grid offset <= theta.
template <class Value>
class History {
public:
    History(double tau, double step, const Value& fill)
        : tau_(tau), step_(step), lags_(grid_steps(tau, step, "history")), samples_(lags_ + 1, fill) {
        if (!(tau > 0.0)) throw Error(ErrorKind::grid_mismatch, "history: tau must be > 0");
    }

    /// samples_j = xi(-tau + j h).
    static History from_function(const std::function<Value(double)>& xi, double tau, double step) {
        History seg(tau, step, xi(-tau));
        for (std::size_t j = 0; j <= seg.lags_; ++j) {
            seg.samples_[j] = xi(-tau + static_cast<double>(j) * step);
        }
        return seg;
    }

    double tau() const noexcept { return tau_; }
    double step() const noexcept { return step_; }
    /// tau / h.
    std::size_t lags() const noexcept { return lags_; }
    std::size_t size() const noexcept { return samples_.size(); }

    /// j = 0 is the oldest sample (offset -tau), j = lags() the newest (offset 0).
    const Value& sample(std::size_t j) const { return samples_[(head_ + j) % samples_.size()]; }
    const Value& latest() const { return sample(lags_); }
    const Value& oldest() const { return sample(0); }

    const Value& value_at(double theta) const {
        if (!(theta >= -tau_ - 1e-12 * tau_) || theta > 1e-12 * tau_) {
            throw Error(ErrorKind::range, "history offset outside [-tau, 0]");
        }
        const double pos = (theta + tau_) / step_;
        auto j = static_cast<std::size_t>(std::max(0.0, std::floor(pos + 1e-9)));
        if (j > lags_) j = lags_;
        return sample(j);
    }

    /// Advance the window by one step: drop the oldest sample, append x.
    void push(Value x) {
        samples_[head_] = std::move(x);
        head_ = (head_ + 1) % samples_.size();
    }

    History pushed(Value x) const {
        History next = *this;
        next.push(std::move(x));
        return next;
    }

    /// max over stored samples of the sample norm.
    double sup_norm() const {
        double best = 0.0;
        for (const Value& v : samples_) best = std::max(best, value_norm(v));
        return best;
    }

    /// Samples ordered oldest to newest.
    std::vector<Value> ordered() const {
        std::vector<Value> out;
        out.reserve(samples_.size());
        for (std::size_t j = 0; j < samples_.size(); ++j) out.push_back(sample(j));
        return out;
    }

private:
    double tau_;
    double step_;
    std::size_t lags_;
    std::vector<Value> samples_;
    std::size_t head_ = 0;
};

using HistorySegment = History<FieldState>;
using ScalarHistory = History<double>;

inline HistorySegment initial_segment(const std::function<FieldState(double)>& xi, double tau,
                                      double step) {
    return HistorySegment::from_function(xi, tau, step);
}

}  // namespace spdde
