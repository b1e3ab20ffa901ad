#include <gtest/gtest.h>

#include <cmath>

#include "dualdebt/economy.hpp"
#include "dualdebt/model.hpp"

using namespace dualdebt;

TEST(Production, Examples) {
    ModelParams p;
    EXPECT_DOUBLE_EQ(production(1.0, 4.0, p), 2.0);
    EXPECT_EQ(production(0.9, 0.0, p), 0.0);
    EXPECT_NEAR(production(1.1, 10.0, p), 3.478505426185217, 1e-12);
    EXPECT_THROW(production(1.0, -1.0, p), DomainError);
    EXPECT_THROW(production(-0.1, 1.0, p), DomainError);
}

TEST(Resources, Examples) {
    ModelParams p;
    p.tau = 0.0;
    EXPECT_NEAR(resources(1.0, 4.0, p), 5.6, 1e-12);
    EXPECT_EQ(resources(1.0, 0.0, p), 0.0);
    p.tau = 0.2;
    EXPECT_NEAR(resources(1.0, 4.0, p), 5.28, 1e-12);
}

TEST(Liquidation, Forms) {
    EXPECT_DOUBLE_EQ(liquidation_value(10.0, Proportional{0.5}), 5.0);
    EXPECT_NEAR(liquidation_value(0.01, SqrtForm{0.1}), 0.02, 1e-15);
    EXPECT_EQ(liquidation_value(0.0, Proportional{0.5}), 0.0);
    EXPECT_EQ(liquidation_value(0.0, SqrtForm{0.3}), 0.0);
    double prev = 0.0;
    for (double k = 0.0; k < 30.0; k += 0.37) {
        const double l = liquidation_value(k, SqrtForm{0.2});
        EXPECT_GE(l, prev);
        prev = l;
    }
}

TEST(BudgetResidual, MatchesFormula) {
    ModelParams p;
    const double z = 1.1, b = 0.3, k = 4.0, bn = 0.8, kn = 5.0, q = 0.9;
    const double want = resources(z, k, p) + (p.tau + (1 - p.tau) * q) * bn - kn - b;
    EXPECT_NEAR(budget_residual(z, b, k, bn, kn, q, p), want, 1e-14);
}

TEST(ModelParams, Validation) {
    ModelParams p;
    EXPECT_NO_THROW(p.validate());
    auto field_of = [](ModelParams q) {
        try {
            q.validate();
        } catch (const ParamError& e) {
            return e.field();
        }
        return std::string();
    };
    ModelParams bad = p;
    bad.alpha = 1.2;
    EXPECT_EQ(field_of(bad), "alpha");
    bad = p;
    bad.beta = 1.0;
    EXPECT_EQ(field_of(bad), "beta");
    bad = p;
    bad.b_lo = 0.5;
    EXPECT_EQ(field_of(bad), "b_lo");
    // tau + (1-tau)/(1+rho) must be at least beta
    bad = p;
    bad.tau = 0.0;
    bad.rho = 0.1;
    EXPECT_EQ(field_of(bad), "beta");
    bad = p;
    bad.liquidation = Proportional{1.5};
    EXPECT_FALSE(field_of(bad).empty());
    bad = p;
    bad.b_lo = 0.0;
    bad.b_hi = 0.0;
    EXPECT_NO_THROW(bad.validate());
}

TEST(ShockChain, Construction) {
    const ShockChain one = build_shock_chain({1.0}, {{1.0}});
    EXPECT_EQ(one.size(), 1u);
    EXPECT_EQ(one.z_bar, 1.0);
    const ShockChain two = build_shock_chain({0.9, 1.1}, {{0.8, 0.2}, {0.2, 0.8}});
    EXPECT_DOUBLE_EQ(two.z_bar, 1.1);
    EXPECT_DOUBLE_EQ(two.prob(0, 1), 0.2);
    EXPECT_NEAR(two.expected_state(0), 0.8 * 0.9 + 0.2 * 1.1, 1e-15);
    EXPECT_THROW(build_shock_chain({0.9, 1.1}, {{0.79, 0.2}, {0.2, 0.8}}), ParamError);
    EXPECT_THROW(build_shock_chain({-0.1, 1.1}, {{0.8, 0.2}, {0.2, 0.8}}), ParamError);
    EXPECT_THROW(build_shock_chain({0.9, 1.1}, {{1.0}}), ParamError);
    EXPECT_THROW(build_shock_chain({}, {}), ParamError);
}

TEST(Grids, DeskShape) {
    ModelParams p;
    const ShockChain c = build_shock_chain({0.9, 1.1}, {{0.8, 0.2}, {0.2, 0.8}});
    const Grids g = build_grids(p, c, GridSizes{});
    EXPECT_EQ(g.k.size(), 50u);
    EXPECT_EQ(g.b.size(), 40u);
    EXPECT_EQ(g.v.size(), 40u);
    EXPECT_EQ(g.b.front(), -1.0);
    EXPECT_EQ(g.b.back(), 2.0);
    EXPECT_EQ(g.b[g.b_zero], 0.0);
    EXPECT_EQ(g.v.front(), 0.0);
    EXPECT_EQ(g.k.front(), 0.0);
    EXPECT_DOUBLE_EQ(g.k.back(), 25.0);
    for (std::size_t i = 1; i < g.b.size(); ++i) EXPECT_LT(g.b[i - 1], g.b[i]);
    for (std::size_t i = 1; i < g.k.size(); ++i) EXPECT_LT(g.k[i - 1], g.k[i]);
    EXPECT_NEAR(g.v_max(), 172.5, 1e-9);
    EXPECT_NEAR(default_v_max(p, c, 25.0), 172.5, 1e-9);
}

TEST(Grids, GeometricCapital) {
    GridSizes s;
    s.k_spacing = Spacing::Geometric;
    s.k = 20;
    const auto k = capital_grid(s);
    EXPECT_EQ(k.front(), 0.0);
    EXPECT_NEAR(k.back(), s.k_max, 1e-12);
    for (std::size_t i = 2; i < k.size(); ++i) EXPECT_GT(k[i] - k[i - 1], k[i - 1] - k[i - 2]);
}

TEST(Grids, BondGridDegenerate) {
    const auto b = bond_grid(0.0, 0.0, 5);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0], 0.0);
    const auto c = bond_grid(-1.0, 2.0, 7);
    EXPECT_EQ(c.size(), 7u);
    EXPECT_NE(std::find(c.begin(), c.end(), 0.0), c.end());
    EXPECT_THROW(bond_grid(0.5, 2.0, 5), DomainError);
}

TEST(Economy, Tables) {
    ModelParams p;
    const ShockChain c = build_shock_chain({0.9, 1.1}, {{0.8, 0.2}, {0.2, 0.8}});
    GridSizes s;
    s.k = 6;
    s.b = 5;
    s.v = 5;
    const Economy e = make_economy(p, c, build_grids(p, c, s));
    for (std::size_t z = 0; z < e.nz(); ++z)
        for (std::size_t k = 0; k < e.nk(); ++k) EXPECT_DOUBLE_EQ(e.R(z, k), resources(c.states[z], e.grids.k[k], p));
    for (std::size_t k = 0; k < e.nk(); ++k)
        for (std::size_t kp = 0; kp < e.nk(); ++kp) {
            const bool reachable = e.grids.k[kp] >= (1 - p.delta) * e.grids.k[k];
            EXPECT_EQ(e.admissible(k, kp), reachable);
            if (reachable) EXPECT_EQ(e.cost(k, kp), e.grids.k[kp]);
        }
    EXPECT_DOUBLE_EQ(e.revenue_rate(1.0), 1.0);
    EXPECT_DOUBLE_EQ(e.revenue_rate(0.0), p.tau);
}
