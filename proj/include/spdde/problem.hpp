#pragma once

#include "spdde/drivers.hpp"
#include "spdde/spectral.hpp"
#include "spdde/switching.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace spdde {

using DriftCoefficient = std::function<FieldState(const FieldState& x, const FieldState& y)>;
/// G_p(x, y) as diagonal mode gains: (G dW)_k = gain_k * dW_k.
using DiffusionCoefficient = std::function<FieldState(const FieldState& x, const FieldState& y)>;
using InitialDatum = std::function<FieldState(double theta)>;

/// Mode-wise linear coefficients:
///   F(x, y)_k    = drift_x_k x_k + drift_y_k y_k
///   G(x, y)_k    = diffusion_x_k x_k + diffusion_y_k y_k
///   L(x, y, u)_k = u (jump_x_k x_k + jump_y_k y_k)
struct LinearCoefficients {
    std::vector<double> drift_x, drift_y;
    std::vector<double> diffusion_x, diffusion_y;
    std::vector<double> jump_x, jump_y;

    static LinearCoefficients uniform(std::size_t dimension, double drift_x, double drift_y,
                                      double diffusion_x, double diffusion_y, double jump_x,
                                      double jump_y);
    std::size_t dimension() const noexcept { return drift_x.size(); }
};

/// (F_p, G_p, L_p) of one subsystem. `linear` is set when the family came from
/// LinearCoefficients, which enables closed-form budgets and generator bounds.
struct CoefficientFamily {
    DriftCoefficient drift;
    DiffusionCoefficient diffusion;
    JumpCoefficient jump;
    std::optional<LinearCoefficients> linear;
};

CoefficientFamily make_linear_family(LinearCoefficients c);
CoefficientFamily zero_family(std::size_t dimension);

/// Switched delay equation with Wiener and compensated Poisson drivers:
///   dX = [A X + F_s(X, X(t - tau))] dt + G_s(X, X(t - tau)) dW + int L_s(X, X(t - tau), u) N~(dt, du)
struct SPDDEProblem {
    SpectralOperator op;
    WienerModel wiener;
    JumpModel jumps;
    double tau = 1.0;
    std::map<ModeIndex, CoefficientFamily> families;
    InitialDatum xi;
    double lipschitz_budget = 1.0;      ///< k of the Lipschitz / linear-growth condition
    double fourth_moment_budget = 1.0;  ///< L0 of the fourth-moment jump condition

    std::size_t dimension() const noexcept { return op.dimension(); }
    const CoefficientFamily& family(ModeIndex p) const;

    /// Dimension agreement, tau > 0, positive budgets, at least one family.
    void validate_structure() const;
};

/// Largest quotients observed by sampling; compared against k and L0.
struct HypothesisSample {
    double lipschitz = 0.0;        ///< second-moment Lipschitz quotient
    double growth = 0.0;           ///< second-moment linear-growth quotient
    double jump_lipschitz4 = 0.0;  ///< fourth-moment Lipschitz quotient of L
    double jump_growth4 = 0.0;     ///< fourth-moment growth quotient of L
};

/// Samples random argument pairs (log-uniform scales over 1e-2..1e2) for every
/// family and returns the worst quotient of each condition. The G part uses the
/// Hilbert-Schmidt norm tr(G Q G*) = sum_k lambda_k g_k^2.
HypothesisSample sample_hypothesis_quotients(const SPDDEProblem& prob, std::size_t samples,
                                             std::uint64_t seed);

/// Throws hypothesis-violated if any sampled quotient exceeds its budget.
void check_hypothesis_budgets(const SPDDEProblem& prob, std::size_t samples, std::uint64_t seed);

struct LinearBudgets {
    double lipschitz = 0.0;
    double fourth_moment = 0.0;
};

/// Closed-form k and L0 that dominate the linear families (Young / power-mean bounds).
LinearBudgets derive_linear_budgets(const SPDDEProblem& prob);

}  // namespace spdde
