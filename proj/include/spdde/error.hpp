#pragma once

#include <stdexcept>
#include <string>

namespace spdde {

enum class ErrorKind {
    invalid_dimension,
    invalid_time,
    invalid_parameter,
    invalid_step,
    grid_mismatch,
    range,
    generation,
    invalid_sample,
    fit,
    infeasible,
    maximal_interval,
    domain,
    hypothesis_violated,
    config,
};

const char* to_string(ErrorKind kind);

/// Base error for every precondition or runtime failure raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when a scalar comparison solution leaves every finite bound before T.
class MaximalIntervalError : public Error {
public:
    MaximalIntervalError(double last_valid_time, const std::string& what)
        : Error(ErrorKind::maximal_interval, what), last_valid_time_(last_valid_time) {}

    double last_valid_time() const noexcept { return last_valid_time_; }

private:
    double last_valid_time_;
};

/// Raised when a sampled hypothesis check fails; carries the worst offending sample.
class HypothesisViolation : public Error {
public:
    HypothesisViolation(std::string sample, double excess, const std::string& what)
        : Error(ErrorKind::hypothesis_violated, what), sample_(std::move(sample)), excess_(excess) {}

    const std::string& sample() const noexcept { return sample_; }
    double excess() const noexcept { return excess_; }

private:
    std::string sample_;
    double excess_;
};

}  // namespace spdde
