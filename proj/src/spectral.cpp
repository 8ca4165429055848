#include "spdde/spectral.hpp"

#include "spdde/error.hpp"

#include <algorithm>
#include <cmath>

namespace spdde {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_dimension: return "invalid-dimension";
        case ErrorKind::invalid_time: return "invalid-time";
        case ErrorKind::invalid_parameter: return "invalid-parameter";
        case ErrorKind::invalid_step: return "invalid-step";
        case ErrorKind::grid_mismatch: return "grid-mismatch";
        case ErrorKind::range: return "range";
        case ErrorKind::generation: return "generation";
        case ErrorKind::invalid_sample: return "invalid-sample";
        case ErrorKind::fit: return "fit";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::maximal_interval: return "maximal-interval";
        case ErrorKind::domain: return "domain";
        case ErrorKind::hypothesis_violated: return "hypothesis-violated";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

namespace {

void require_same_size(const FieldState& a, const FieldState& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::invalid_dimension, "field states have different dimensions");
    }
}

}  // namespace

FieldState& FieldState::operator+=(const FieldState& other) {
    require_same_size(*this, other);
    for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += other.coords[k];
    return *this;
}

FieldState& FieldState::operator-=(const FieldState& other) {
    require_same_size(*this, other);
    for (std::size_t k = 0; k < coords.size(); ++k) coords[k] -= other.coords[k];
    return *this;
}

FieldState& FieldState::operator*=(double factor) {
    for (double& c : coords) c *= factor;
    return *this;
}

FieldState operator+(FieldState lhs, const FieldState& rhs) { return lhs += rhs; }
FieldState operator-(FieldState lhs, const FieldState& rhs) { return lhs -= rhs; }
FieldState operator*(double factor, FieldState x) { return x *= factor; }

double norm_squared(const FieldState& x) {
    double s = 0.0;
    for (double c : x.coords) s += c * c;
    return s;
}

double norm(const FieldState& x) { return std::sqrt(norm_squared(x)); }

double inner(const FieldState& x, const FieldState& y) {
    require_same_size(x, y);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

FieldState hadamard(const FieldState& x, std::span<const double> factors) {
    if (x.size() != factors.size()) {
        throw Error(ErrorKind::invalid_dimension, "factor count does not match state dimension");
    }
    FieldState out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] * factors[k];
    return out;
}

SpectralOperator::SpectralOperator(std::vector<double> eigenvalues, std::string label)
    : eigenvalues_(std::move(eigenvalues)), label_(std::move(label)) {
    if (eigenvalues_.empty()) {
        throw Error(ErrorKind::invalid_dimension, "spectral operator needs at least one mode");
    }
    for (double mu : eigenvalues_) {
        if (!std::isfinite(mu) || mu > 0.0) {
            throw Error(ErrorKind::invalid_parameter,
                        "eigenvalues must be finite and non-positive (contraction semigroup)");
        }
    }
    if (!std::is_sorted(eigenvalues_.begin(), eigenvalues_.end(), std::greater<>())) {
        throw Error(ErrorKind::invalid_parameter, "eigenvalues must be sorted non-increasing");
    }
}

std::vector<double> SpectralOperator::semigroup_factors(double t) const {
    if (!(t >= 0.0)) throw Error(ErrorKind::invalid_time, "semigroup time must be >= 0");
    std::vector<double> f(eigenvalues_.size());
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::exp(eigenvalues_[k] * t);
    return f;
}

std::vector<double> SpectralOperator::yosida_factors(double n) const {
    if (!(n > 0.0)) throw Error(ErrorKind::invalid_parameter, "Yosida parameter n must be > 0");
    std::vector<double> f(eigenvalues_.size());
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = n / (n - eigenvalues_[k]);
    return f;
}

FieldState SpectralOperator::apply(const FieldState& x) const {
    return hadamard(x, eigenvalues_);
}

SpectralOperator make_dirichlet_laplacian(std::size_t dimension) {
    if (dimension == 0) {
        throw Error(ErrorKind::invalid_dimension, "Dirichlet Laplacian needs M >= 1");
    }
    std::vector<double> mu(dimension);
    for (std::size_t k = 0; k < dimension; ++k) {
        const double index = static_cast<double>(k + 1);
        mu[k] = -index * index;
    }
    return SpectralOperator(std::move(mu), "dirichlet_laplacian");
}

FieldState semigroup_apply(const SpectralOperator& op, double t, const FieldState& x) {
    return hadamard(x, op.semigroup_factors(t));
}

FieldState yosida_apply(const SpectralOperator& op, double n, const FieldState& x) {
    return hadamard(x, op.yosida_factors(n));
}

}  // namespace spdde
