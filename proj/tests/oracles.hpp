#pragma once

// Independent reference computations used by unit and acceptance tests.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

/// Exact solution of x'(t) = mu x(t) + b x(t - tau) with x = c on [-tau, 0], mu != 0.
///
/// On [k tau, (k+1) tau] with s = t - k tau the solution is a_k + P_k(s) e^{mu s}, where
/// a_k = -b a_{k-1} / mu, P_k' = b P_{k-1}, and P_k(0) matches continuity at k tau.
class MethodOfSteps {
public:
    MethodOfSteps(double mu, double b, double tau, double c, std::size_t intervals)
        : mu_(mu), b_(b), tau_(tau) {
        double a_prev = c;
        std::vector<double> p_prev;  // zero polynomial
        double x_at_start = c;
        for (std::size_t k = 0; k < intervals; ++k) {
            const double a = -b * a_prev / mu;
            std::vector<double> p(p_prev.size() + 1, 0.0);
            for (std::size_t j = 0; j < p_prev.size(); ++j) p[j + 1] = b * p_prev[j] / static_cast<double>(j + 1);
            p[0] = x_at_start - a;
            a_.push_back(a);
            poly_.push_back(p);
            x_at_start = a + eval(p, tau) * std::exp(mu * tau);
            a_prev = a;
            p_prev = p;
        }
    }

    double operator()(double t) const {
        auto k = static_cast<std::size_t>(std::floor(t / tau_));
        if (k >= a_.size()) k = a_.size() - 1;
        const double s = t - static_cast<double>(k) * tau_;
        return a_[k] + eval(poly_[k], s) * std::exp(mu_ * s);
    }

private:
    static double eval(const std::vector<double>& p, double s) {
        double v = 0.0;
        for (std::size_t j = p.size(); j-- > 0;) v = v * s + p[j];
        return v;
    }

    double mu_, b_, tau_;
    std::vector<double> a_;
    std::vector<std::vector<double>> poly_;
};

/// Plain bisection for the root of f on [lo, hi] with f(lo) < 0 < f(hi).
template <class F>
double bisect(F f, double lo, double hi, int iterations = 200) {
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
