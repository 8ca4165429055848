#pragma once

#include "spdde/problem.hpp"
#include "spdde/stability.hpp"
#include "spdde/switching.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spdde {

inline constexpr int kSchemaVersion = 1;

struct RunBlock {
    double T = 5.0;
    double h = 0.05;
    std::size_t trajectories = 2000;
    std::uint64_t seed = 0;
    std::vector<double> yosida_ladder{10.0, 100.0, 1000.0};
    std::size_t export_paths = 1;
};

struct CertifyBlock {
    LyapunovWeights lyapunov_weights;  ///< defaults to all ones per index
    std::string measure = "head";      ///< "head": ||phi(0)||^q, "sup": ||phi||_D^q
    double q = 2.0;
    std::vector<double> eta{0.5, 0.1, 0.05};
    double u_scale = 0.01;             ///< U(r) = u_scale r in the fixed-index check
    double yosida_n = 100.0;
    std::vector<double> scales{0.5, 1.0, 2.0};
};

struct ExperimentConfig {
    SPDDEProblem problem;
    SwitchingSignal signal;
    RunBlock run;
    CertifyBlock certify;
    nlohmann::json signal_json;  ///< signal as resolved (generated signals included)
};

struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trajectories;
};

/// Parses and validates a config document. Unknown keys and schema violations
/// throw config errors naming the offending key path.
ExperimentConfig parse_config(const nlohmann::json& doc, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Lyapunov data built from the certify block: quadratic V, alpha1 = alpha2 = identity,
/// h = h0 = the selected measure, U(r) = u_scale r, mu from the weights.
LyapunovSpec make_lyapunov_spec(const ExperimentConfig& cfg);

}  // namespace spdde
