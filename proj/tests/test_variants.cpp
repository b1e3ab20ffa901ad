#include <gtest/gtest.h>

#include <cstdio>

#include "dualdebt/variants.hpp"
#include "dualdebt/verify.hpp"
#include "support.hpp"

using namespace dualdebt;
using namespace testing_support;

TEST(AdjustmentCost, Examples) {
    const AdjustmentCostSpec spec{2.0};
    EXPECT_NEAR(adjustment_cost(1.0, 1.0, 0.1, spec), 0.01, 1e-15);
    EXPECT_EQ(adjustment_cost(4.0, 3.6, 0.1, spec), 0.0);
    EXPECT_EQ(adjustment_cost(0.0, 0.0, 0.1, spec), 0.0);
    EXPECT_THROW(adjustment_cost(0.0, 1.0, 0.1, spec), DomainError);
    EXPECT_THROW(adjustment_cost(1.0, 1.0, 0.1, AdjustmentCostSpec{-1.0}), DomainError);
    EXPECT_EQ(adjustment_cost(2.0, 7.0, 0.1, AdjustmentCostSpec{0.0}), 0.0);
}

TEST(AdjustmentCost, ZeroPsiIsBitIdentical) {
    const ModelParams p;
    const ShockChain c = desk_chain();
    const Grids g = build_grids(p, c, sizes(12, 10, 10));
    const Equilibrium base = solve_equilibrium(make_economy(p, c, g));
    const Equilibrium adj = solve_with_adjustment_costs(p, AdjustmentCostSpec{0.0}, c, g);
    EXPECT_EQ(adj.V, base.V);
    EXPECT_EQ(adj.q.q, base.q.q);
    EXPECT_EQ(adj.B.B, base.B.B);
    EXPECT_EQ(adj.policy.b_index, base.policy.b_index);
    EXPECT_EQ(adj.policy.k_index, base.policy.k_index);
    EXPECT_EQ(adj.policy.dividend, base.policy.dividend);
    EXPECT_EQ(adj.policy.label, base.policy.label);
}

TEST(AdjustmentCost, SolvesAndPassesChecks) {
    const ModelParams p;
    const ShockChain c = desk_chain();
    const Grids g = build_grids(p, c, sizes(12, 10, 10));
    const Equilibrium small = solve_with_adjustment_costs(p, AdjustmentCostSpec{0.0}, c, g);
    const Equilibrium big = solve_with_adjustment_costs(p, AdjustmentCostSpec{5.0}, c, g);
    for (const CheckResult& r : verify_equilibrium(big, SolverOptions{}.tol))
        EXPECT_TRUE(r.pass) << r.name << " worst " << r.worst;
    // telemetry: investment magnitudes under large psi
    std::size_t shrink = 0, compared = 0;
    for (std::size_t i = 0; i < big.policy.investment.size(); ++i) {
        if (big.policy.b_index.data()[i] < 0 || small.policy.b_index.data()[i] < 0) continue;
        ++compared;
        if (std::abs(big.policy.investment.data()[i]) <= std::abs(small.policy.investment.data()[i]) + 1e-12) ++shrink;
    }
    std::printf("psi=5: |i| weakly below psi=0 at %zu of %zu states\n", shrink, compared);
    EXPECT_GT(compared, 0u);
}

TEST(Exogenous, NoDebtPresentValue) {
    ExogenousModelParams p;
    p.b_lo = 0.0;
    p.b_hi = 0.0;
    const ShockChain c = build_shock_chain({0.8, 1.3}, {{0.5, 0.5}, {0.5, 0.5}});
    const Grids g = build_exogenous_grids(p, c, 1, 40);
    SolverOptions opt;
    opt.tol = 1e-10;
    const Equilibrium eq = solve_exogenous_cashflow(p, c, g, opt);
    const double ez = 0.5 * 0.8 + 0.5 * 1.3;
    for (std::size_t z = 0; z < 2; ++z) {
        const double pv = c.states[z] + p.beta * ez / (1 - p.beta);
        EXPECT_LE(std::abs(eq.V(z, 0, 0) - pv) / pv, 1e-6) << eq.V(z, 0, 0) << " vs " << pv;
    }
}

TEST(Exogenous, DeterministicChainIsRiskFree) {
    ExogenousModelParams p;
    const ShockChain c = build_shock_chain({1.0}, {{1.0}});
    const Equilibrium eq = solve_exogenous_cashflow(p, c, build_exogenous_grids(p, c, 20, 30));
    const Economy& e = eq.econ;
    for (std::size_t b = 0; b < e.nb(); ++b) {
        if (e.grids.b[b] <= 0.0) continue;
        // no default reachable within the debt range: z + revenue covers b_hi
        EXPECT_DOUBLE_EQ(eq.q.q(0, b, 0), 1.0 / (1.0 + p.rho));
    }
    for (const CheckResult& r : verify_equilibrium(eq, SolverOptions{}.tol)) EXPECT_TRUE(r.pass) << r.name;
}

TEST(Exogenous, RiskyChainPassesChecks) {
    ExogenousModelParams p;
    p.b_hi = 8.0;
    const ShockChain c = build_shock_chain({0.2, 1.0, 1.8}, {{0.6, 0.3, 0.1}, {0.2, 0.6, 0.2}, {0.1, 0.3, 0.6}});
    const Equilibrium eq = solve_exogenous_cashflow(p, c, build_exogenous_grids(p, c, 30, 30));
    EXPECT_TRUE(eq.diagnostics.converged);
    EXPECT_LE(eq.diagnostics.empirical_rate, eq.weights.theta + 0.02);
    for (const CheckResult& r : verify_equilibrium(eq, SolverOptions{}.tol)) EXPECT_TRUE(r.pass) << r.name << " " << r.worst;
    EXPECT_EQ(eq.weights.slope, 0.0);
    EXPECT_DOUBLE_EQ(eq.weights.phi0(0.0), eq.weights.eta);
}

TEST(Exogenous, Validation) {
    ExogenousModelParams p;
    p.beta = 1.2;
    EXPECT_THROW(p.validate(), ParamError);
}
