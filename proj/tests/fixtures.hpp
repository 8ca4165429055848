#pragma once

#include "spdde/config.hpp"
#include "spdde/problem.hpp"

#include <string>

namespace fixture {

inline spdde::ExperimentConfig shipped(const std::string& name) {
    return spdde::load_config(std::string(SPDDE_CONFIG_DIR) + "/" + name);
}

/// One-mode (or M-mode uniform) linear problem without jumps unless marks are given.
inline spdde::SPDDEProblem linear_problem(std::vector<double> eigenvalues, spdde::LinearCoefficients c,
                                          double tau, double xi_value, spdde::JumpModel jumps = {}) {
    const std::size_t m = eigenvalues.size();
    spdde::SPDDEProblem prob{spdde::SpectralOperator(std::move(eigenvalues), "test"),
                             spdde::WienerModel(std::vector<double>(m, 1.0)),
                             std::move(jumps),
                             tau,
                             {},
                             [m, xi_value](double) { return spdde::FieldState(m, xi_value); },
                             1.0,
                             1.0};
    prob.families.emplace(0, spdde::make_linear_family(std::move(c)));
    return prob;
}

}  // namespace fixture
