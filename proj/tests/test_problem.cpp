#include "fixtures.hpp"

#include "spdde/error.hpp"

#include <gtest/gtest.h>

using namespace spdde;

TEST(Problem, ShippedFamiliesRespectBudgets) {
    for (const char* name : {"linear_stable.json", "switched_adt.json", "fixed_index.json"}) {
        const auto cfg = fixture::shipped(name);
        const HypothesisSample q = sample_hypothesis_quotients(cfg.problem, 1000, 77);
        EXPECT_LE(q.lipschitz, cfg.problem.lipschitz_budget) << name;
        EXPECT_LE(q.growth, cfg.problem.lipschitz_budget) << name;
        EXPECT_LE(q.jump_lipschitz4, cfg.problem.fourth_moment_budget) << name;
        EXPECT_LE(q.jump_growth4, cfg.problem.fourth_moment_budget) << name;
        EXPECT_NO_THROW(check_hypothesis_budgets(cfg.problem, 1000, 3));
    }
}

TEST(Problem, TightBudgetIsReported) {
    auto cfg = fixture::shipped("linear_stable.json");
    cfg.problem.lipschitz_budget = 1e-4;
    try {
        check_hypothesis_budgets(cfg.problem, 200, 1);
        FAIL() << "expected a violation";
    } catch (const HypothesisViolation& e) {
        EXPECT_GT(e.excess(), 0.0);
        EXPECT_NE(e.sample().find("vs k"), std::string::npos);
    }
}

TEST(Problem, LinearFamilyEvaluation) {
    LinearCoefficients c = LinearCoefficients::uniform(2, -1.0, 0.5, 0.3, 0.1, 0.2, 0.4);
    const CoefficientFamily fam = make_linear_family(c);
    const FieldState x{1.0, 2.0}, y{-1.0, 3.0};
    EXPECT_EQ(fam.drift(x, y), (FieldState{-1.0 - 0.5, -2.0 + 1.5}));
    const FieldState g = fam.diffusion(x, y);
    EXPECT_NEAR(g[0], 0.3 - 0.1, 1e-15);
    EXPECT_NEAR(g[1], 0.6 + 0.3, 1e-15);
    const FieldState L = fam.jump(x, y, 2.0);
    EXPECT_NEAR(L[0], 2.0 * (0.2 - 0.4), 1e-15);
    EXPECT_NEAR(L[1], 2.0 * (0.4 + 1.2), 1e-15);
}

TEST(Problem, StructureValidation) {
    auto prob = fixture::linear_problem({-1.0}, LinearCoefficients::uniform(1, 0, 0, 0, 0, 0, 0), 1.0, 1.0);
    EXPECT_NO_THROW(prob.validate_structure());
    prob.tau = 0.0;
    EXPECT_THROW(prob.validate_structure(), Error);
    prob.tau = 1.0;
    prob.lipschitz_budget = 0.0;
    EXPECT_THROW(prob.validate_structure(), Error);
    prob.lipschitz_budget = 1.0;
    EXPECT_THROW(prob.family(5), Error);
    prob.families.clear();
    EXPECT_THROW(prob.validate_structure(), Error);
}

TEST(Problem, ZeroFamilyHasZeroQuotients) {
    auto prob = fixture::linear_problem({-1.0, -4.0}, LinearCoefficients::uniform(2, 0, 0, 0, 0, 0, 0), 1.0, 0.0,
                                        JumpModel({1.0}, {1.0}));
    const HypothesisSample q = sample_hypothesis_quotients(prob, 100, 0);
    EXPECT_EQ(q.lipschitz, 0.0);
    EXPECT_EQ(q.growth, 0.0);
    EXPECT_EQ(q.jump_lipschitz4, 0.0);
}
