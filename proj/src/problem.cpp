#include "spdde/problem.hpp"

#include "spdde/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spdde {

LinearCoefficients LinearCoefficients::uniform(std::size_t dimension, double drift_x, double drift_y,
                                               double diffusion_x, double diffusion_y, double jump_x,
                                               double jump_y) {
    LinearCoefficients c;
    c.drift_x.assign(dimension, drift_x);
    c.drift_y.assign(dimension, drift_y);
    c.diffusion_x.assign(dimension, diffusion_x);
    c.diffusion_y.assign(dimension, diffusion_y);
    c.jump_x.assign(dimension, jump_x);
    c.jump_y.assign(dimension, jump_y);
    return c;
}

CoefficientFamily make_linear_family(LinearCoefficients c) {
    const std::size_t m = c.dimension();
    for (const auto* v : {&c.drift_y, &c.diffusion_x, &c.diffusion_y, &c.jump_x, &c.jump_y}) {
        if (v->size() != m) throw Error(ErrorKind::invalid_dimension, "linear coefficient vectors differ in length");
    }
    CoefficientFamily fam;
    fam.drift = [a = c.drift_x, b = c.drift_y](const FieldState& x, const FieldState& y) {
        FieldState out(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) out[k] = a[k] * x[k] + b[k] * y[k];
        return out;
    };
    fam.diffusion = [a = c.diffusion_x, b = c.diffusion_y](const FieldState& x, const FieldState& y) {
        FieldState out(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) out[k] = a[k] * x[k] + b[k] * y[k];
        return out;
    };
    fam.jump = [a = c.jump_x, b = c.jump_y](const FieldState& x, const FieldState& y, double u) {
        FieldState out(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) out[k] = u * (a[k] * x[k] + b[k] * y[k]);
        return out;
    };
    fam.linear = std::move(c);
    return fam;
}

CoefficientFamily zero_family(std::size_t dimension) {
    return make_linear_family(LinearCoefficients::uniform(dimension, 0, 0, 0, 0, 0, 0));
}

const CoefficientFamily& SPDDEProblem::family(ModeIndex p) const {
    auto it = families.find(p);
    if (it == families.end()) {
        throw Error(ErrorKind::invalid_parameter, "no coefficient family for index " + std::to_string(p));
    }
    return it->second;
}

void SPDDEProblem::validate_structure() const {
    if (wiener.dimension() != op.dimension()) {
        throw Error(ErrorKind::invalid_dimension, "Q spectrum and operator spectrum differ in dimension");
    }
    if (!(tau > 0.0)) throw Error(ErrorKind::invalid_parameter, "delay tau must be > 0");
    if (!(lipschitz_budget > 0.0) || !(fourth_moment_budget > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "declared budgets k and L0 must be > 0");
    }
    if (families.empty()) throw Error(ErrorKind::invalid_parameter, "problem has no coefficient families");
    for (const auto& [p, fam] : families) {
        if (!fam.drift || !fam.diffusion || !fam.jump) {
            throw Error(ErrorKind::invalid_parameter, "family " + std::to_string(p) + " is incomplete");
        }
        if (fam.linear && fam.linear->dimension() != op.dimension()) {
            throw Error(ErrorKind::invalid_dimension, "family " + std::to_string(p) + " has the wrong dimension");
        }
    }
    if (!xi) throw Error(ErrorKind::invalid_parameter, "problem has no initial datum");
    if (xi(0.0).size() != op.dimension()) {
        throw Error(ErrorKind::invalid_dimension, "initial datum has the wrong dimension");
    }
}

namespace {

double hs_norm_squared(const FieldState& gains, const WienerModel& w) {
    double s = 0.0;
    for (std::size_t k = 0; k < gains.size(); ++k) s += w.q_eigenvalues()[k] * gains[k] * gains[k];
    return s;
}

FieldState random_state(std::size_t m, RngStream& rng) {
    const double scale = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
    FieldState x(m);
    for (std::size_t k = 0; k < m; ++k) x[k] = scale * rng.normal();
    return x;
}

}  // namespace

HypothesisSample sample_hypothesis_quotients(const SPDDEProblem& prob, std::size_t samples,
                                             std::uint64_t seed) {
    HypothesisSample worst;
    const std::size_t m = prob.dimension();
    const auto& marks = prob.jumps.marks();
    const auto& rates = prob.jumps.intensities();
    for (const auto& [p, fam] : prob.families) {
        RngStream rng(seed, static_cast<std::uint64_t>(p), StreamRole::sampling);
        for (std::size_t s = 0; s < samples; ++s) {
            const FieldState x1 = random_state(m, rng), x2 = random_state(m, rng);
            const FieldState y1 = random_state(m, rng), y2 = random_state(m, rng);
            const double dx2 = norm_squared(x1 - x2), dy2 = norm_squared(y1 - y2);

            double lip = norm_squared(fam.drift(x1, y1) - fam.drift(x2, y2)) +
                         hs_norm_squared(fam.diffusion(x1, y1) - fam.diffusion(x2, y2), prob.wiener);
            double grow = norm_squared(fam.drift(x1, y1)) + hs_norm_squared(fam.diffusion(x1, y1), prob.wiener);
            double lip4 = 0.0, grow4 = 0.0;
            for (std::size_t i = 0; i < marks.size(); ++i) {
                const double d2 = norm_squared(fam.jump(x1, y1, marks[i]) - fam.jump(x2, y2, marks[i]));
                const double g2 = norm_squared(fam.jump(x1, y1, marks[i]));
                lip += rates[i] * d2;
                grow += rates[i] * g2;
                lip4 += rates[i] * d2 * d2;
                grow4 += rates[i] * g2 * g2;
            }
            const double nx2 = norm_squared(x1), ny2 = norm_squared(y1);
            worst.lipschitz = std::max(worst.lipschitz, lip / (dx2 + dy2));
            worst.growth = std::max(worst.growth, grow / (1.0 + nx2 + ny2));
            worst.jump_lipschitz4 = std::max(worst.jump_lipschitz4, lip4 / (dx2 * dx2 + dy2 * dy2));
            worst.jump_growth4 = std::max(worst.jump_growth4, grow4 / (1.0 + nx2 * nx2 + ny2 * ny2));
        }
    }
    return worst;
}

void check_hypothesis_budgets(const SPDDEProblem& prob, std::size_t samples, std::uint64_t seed) {
    const HypothesisSample q = sample_hypothesis_quotients(prob, samples, seed);
    struct Item {
        const char* name;
        double value;
        double budget;
    };
    const Item items[] = {{"lipschitz quotient vs k", q.lipschitz, prob.lipschitz_budget},
                          {"linear-growth quotient vs k", q.growth, prob.lipschitz_budget},
                          {"fourth-moment lipschitz quotient vs L0", q.jump_lipschitz4, prob.fourth_moment_budget},
                          {"fourth-moment growth quotient vs L0", q.jump_growth4, prob.fourth_moment_budget}};
    const Item* worst = nullptr;
    for (const Item& it : items) {
        if (it.value > it.budget && (!worst || it.value / it.budget > worst->value / worst->budget)) worst = &it;
    }
    if (worst) {
        std::ostringstream os;
        os << worst->name << ": sampled " << worst->value << " exceeds budget " << worst->budget;
        throw HypothesisViolation(worst->name, worst->value - worst->budget, os.str());
    }
}

LinearBudgets derive_linear_budgets(const SPDDEProblem& prob) {
    const auto& q = prob.wiener.q_eigenvalues();
    const double lambda2 = prob.jumps.mark_moment(2);
    const double lambda4 = prob.jumps.mark_moment(4);
    auto max_sq = [](const std::vector<double>& v) {
        double best = 0.0;
        for (double a : v) best = std::max(best, a * a);
        return best;
    };
    auto max_weighted_sq = [&q](const std::vector<double>& v) {
        double best = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) best = std::max(best, q[k] * v[k] * v[k]);
        return best;
    };
    LinearBudgets b;
    for (const auto& [p, fam] : prob.families) {
        if (!fam.linear) {
            throw Error(ErrorKind::invalid_parameter,
                        "closed-form budgets need linear coefficients (index " + std::to_string(p) + ")");
        }
        const auto& c = *fam.linear;
        const double on_x = max_sq(c.drift_x) + max_weighted_sq(c.diffusion_x) + lambda2 * max_sq(c.jump_x);
        const double on_y = max_sq(c.drift_y) + max_weighted_sq(c.diffusion_y) + lambda2 * max_sq(c.jump_y);
        b.lipschitz = std::max(b.lipschitz, 2.0 * std::max(on_x, on_y));
        const double e4 = max_sq(c.jump_x) * max_sq(c.jump_x);
        const double f4 = max_sq(c.jump_y) * max_sq(c.jump_y);
        b.fourth_moment = std::max(b.fourth_moment, 8.0 * lambda4 * std::max(e4, f4));
    }
    return b;
}

}  // namespace spdde
