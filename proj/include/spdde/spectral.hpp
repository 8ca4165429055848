#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace spdde {

/// Element of the truncated Hilbert space: coefficients against the shared
/// orthonormal eigenbasis {e_k} of the operator and of the noise covariance.
struct FieldState {
    std::vector<double> coords;

    FieldState() = default;
    explicit FieldState(std::size_t dimension, double fill = 0.0) : coords(dimension, fill) {}
    explicit FieldState(std::vector<double> values) : coords(std::move(values)) {}
    FieldState(std::initializer_list<double> values) : coords(values) {}

    std::size_t size() const noexcept { return coords.size(); }
    double& operator[](std::size_t k) { return coords[k]; }
    double operator[](std::size_t k) const { return coords[k]; }

    FieldState& operator+=(const FieldState& other);
    FieldState& operator-=(const FieldState& other);
    FieldState& operator*=(double factor);

    bool operator==(const FieldState&) const = default;
};

FieldState operator+(FieldState lhs, const FieldState& rhs);
FieldState operator-(FieldState lhs, const FieldState& rhs);
FieldState operator*(double factor, FieldState x);

double norm_squared(const FieldState& x);
double norm(const FieldState& x);
double inner(const FieldState& x, const FieldState& y);

/// Mode-wise product x_k * factors_k.
FieldState hadamard(const FieldState& x, std::span<const double> factors);

/// Diagonal generator A of a contraction semigroup, given by its spectrum.
///
/// Eigenvalues are non-positive and sorted non-increasing, so T(t) = e^{tA}
/// has norm at most one and every n > 0 lies in the resolvent set.
class SpectralOperator {
public:
    SpectralOperator(std::vector<double> eigenvalues, std::string label);

    std::size_t dimension() const noexcept { return eigenvalues_.size(); }
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    const std::string& label() const noexcept { return label_; }

    /// Per-mode factors exp(mu_k t).
    std::vector<double> semigroup_factors(double t) const;
    /// Per-mode factors n / (n - mu_k) of R(n) = n R(n, A).
    std::vector<double> yosida_factors(double n) const;

    /// A x, mode k scaled by mu_k.
    FieldState apply(const FieldState& x) const;

private:
    std::vector<double> eigenvalues_;
    std::string label_;
};

/// Dirichlet Laplacian on (0, pi): mu_k = -k^2, k = 1..M.
SpectralOperator make_dirichlet_laplacian(std::size_t dimension);

FieldState semigroup_apply(const SpectralOperator& op, double t, const FieldState& x);
FieldState yosida_apply(const SpectralOperator& op, double n, const FieldState& x);

}  // namespace spdde
