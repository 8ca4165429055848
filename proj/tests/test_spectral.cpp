#include "spdde/error.hpp"
#include "spdde/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace spdde;

TEST(SpectralOperator, DirichletLaplacianSpectrum) {
    EXPECT_EQ(make_dirichlet_laplacian(1).eigenvalues(), std::vector<double>({-1.0}));
    EXPECT_EQ(make_dirichlet_laplacian(3).eigenvalues(), std::vector<double>({-1.0, -4.0, -9.0}));
    try {
        make_dirichlet_laplacian(0);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_dimension);
    }
}

TEST(SpectralOperator, RejectsPositiveOrUnsortedEigenvalues) {
    EXPECT_THROW(SpectralOperator({0.5}, "bad"), Error);
    EXPECT_THROW(SpectralOperator({-4.0, -1.0}, "unsorted"), Error);
    EXPECT_THROW(SpectralOperator({}, "empty"), Error);
    EXPECT_NO_THROW(SpectralOperator({0.0, -1.0}, "ok"));
}

TEST(Semigroup, Examples) {
    const auto op1 = make_dirichlet_laplacian(1);
    const FieldState x{2.5};
    EXPECT_EQ(semigroup_apply(op1, 0.0, x), x);
    EXPECT_NEAR(semigroup_apply(op1, 1.0, FieldState{1.0})[0], 0.36788, 1e-5);
    EXPECT_NEAR(semigroup_apply(op1, 1.0, FieldState{1.0})[0], std::exp(-1.0), 1e-12);

    const auto op2 = make_dirichlet_laplacian(2);
    const FieldState y = semigroup_apply(op2, 0.5, FieldState{1.0, 1.0});
    EXPECT_NEAR(y[0], std::exp(-0.5), 1e-15);
    EXPECT_NEAR(y[1], std::exp(-2.0), 1e-15);

    try {
        semigroup_apply(op2, -0.1, FieldState{1.0, 1.0});
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_time);
    }
}

TEST(Yosida, Examples) {
    const auto op = make_dirichlet_laplacian(2);
    EXPECT_DOUBLE_EQ(yosida_apply(make_dirichlet_laplacian(1), 1.0, FieldState{1.0})[0], 0.5);
    const FieldState y = yosida_apply(op, 4.0, FieldState{0.0, 1.0});
    EXPECT_DOUBLE_EQ(y[0], 0.0);
    EXPECT_DOUBLE_EQ(y[1], 0.5);

    const auto op8 = make_dirichlet_laplacian(8);
    FieldState x(8);
    for (std::size_t k = 0; k < 8; ++k) x[k] = 1.0 + static_cast<double>(k);
    const FieldState z = yosida_apply(op8, 1e9, x);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(z[k] / x[k], 1.0, 1e-6);

    EXPECT_THROW(yosida_apply(op, 0.0, FieldState{1.0, 1.0}), Error);
}

TEST(Semigroup, ContractionAndSemigroupLaw) {
    const auto op = make_dirichlet_laplacian(8);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        FieldState x(8);
        for (std::size_t k = 0; k < 8; ++k) x[k] = 2.0 * unit(gen) - 1.0;
        x *= 1.0 / std::max(1.0, norm(x));
        const double s = 2.0 * unit(gen);
        const double t = 2.0 * unit(gen);
        EXPECT_LE(norm(semigroup_apply(op, t, x)), norm(x));
        const FieldState composed = semigroup_apply(op, s, semigroup_apply(op, t, x));
        EXPECT_LE(norm(composed - semigroup_apply(op, s + t, x)), 1e-12);
    }
}

TEST(Yosida, MonotoneConvergence) {
    const auto op = make_dirichlet_laplacian(8);
    FieldState x(8, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double n : {1.0, 10.0, 100.0, 1000.0}) {
        const double gap = norm(yosida_apply(op, n, x) - x);
        EXPECT_LE(gap, prev);
        prev = gap;
    }
}

TEST(FieldState, NormAndArithmetic) {
    const FieldState a{3.0, 4.0};
    EXPECT_DOUBLE_EQ(norm_squared(a), 25.0);
    EXPECT_DOUBLE_EQ(norm(a), 5.0);
    EXPECT_DOUBLE_EQ(inner(a, FieldState{1.0, -1.0}), -1.0);
    EXPECT_EQ(a + a, 2.0 * a);
    EXPECT_EQ(a - a, FieldState(2));
}
