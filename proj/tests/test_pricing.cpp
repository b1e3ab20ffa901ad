#include <gtest/gtest.h>

#include "dualdebt/pricing.hpp"
#include "support.hpp"

using namespace dualdebt;
using namespace testing_support;

TEST(BreakEven, Examples) {
    EXPECT_NEAR(break_even_price(-0.5, 0.0, 0.3, 0.04).q, 0.9615384615384615, 1e-15);
    EXPECT_DOUBLE_EQ(break_even_price(1.0, 0.0, 0.0, 0.04).q, 1.0 / 1.04);
    const PriceQuote r = break_even_price(1.0, 0.4, 0.5, 0.04);
    EXPECT_NEAR(r.q, 0.7 / 1.04, 1e-15);
    EXPECT_NEAR(r.q, 0.67307692307, 1e-10);
    EXPECT_FALSE(r.capped);
    EXPECT_THROW(break_even_price(1.0, 0.4, 1.5, 0.04), DomainError);
    EXPECT_THROW(break_even_price(1.0, 0.4, -0.1, 0.04), DomainError);
}

TEST(BreakEven, CapWhenRecoveryExceedsDebt) {
    const PriceQuote r = break_even_price(0.5, 0.8, 0.4, 0.04);
    EXPECT_TRUE(r.capped);
    EXPECT_DOUBLE_EQ(r.q, 1.0 / 1.04);
    EXPECT_FALSE(break_even_price(0.5, 0.8, 0.0, 0.04).capped);
}

TEST(BreakEven, NonIncreasingInDefaultProbability) {
    double prev = 2.0;
    for (int i = 0; i <= 20; ++i) {
        const double q = break_even_price(1.5, 0.3, i / 20.0, 0.04).q;
        EXPECT_LE(q, prev + 1e-15);
        prev = q;
    }
}

namespace {

Economy small_economy(LiquidationSpec liq) {
    ModelParams p;
    p.liquidation = liq;
    const ShockChain c = desk_chain();
    return make_economy(p, c, build_grids(p, c, sizes(6, 7, 5)));
}

}  // namespace

TEST(PriceSchedule, PositiveValueIsRiskFree) {
    const Economy e = small_economy(Proportional{0.5});
    const ValueTable V(e.nz(), e.nb(), e.nk(), 3.0);
    const PriceTable q = price_schedule(V, e);
    for (double x : q.q.data()) EXPECT_DOUBLE_EQ(x, 1.0 / 1.04);
    for (double x : q.default_prob.data()) EXPECT_EQ(x, 0.0);
}

TEST(PriceSchedule, TotalLoss) {
    const Economy e = small_economy(Proportional{0.0});
    const ValueTable V(e.nz(), e.nb(), e.nk(), 0.0);
    const PriceTable q = price_schedule(V, e);
    for (std::size_t z = 0; z < e.nz(); ++z)
        for (std::size_t b = 0; b < e.nb(); ++b)
            for (std::size_t k = 0; k < e.nk(); ++k) {
                if (e.grids.b[b] > 0.0) EXPECT_EQ(q.q(z, b, k), 0.0);
                else EXPECT_DOUBLE_EQ(q.q(z, b, k), 1.0 / 1.04);
            }
}

TEST(PriceSchedule, OneStepEnumeration) {
    // V(z1, .) = 0, V(z2, .) > 0, L = 0: lenders lose everything with probability P(z -> z1).
    const Economy e = small_economy(Proportional{0.0});
    ValueTable V(e.nz(), e.nb(), e.nk(), 0.0);
    for (std::size_t b = 0; b < e.nb(); ++b)
        for (std::size_t k = 0; k < e.nk(); ++k) V(1, b, k) = 1.0;
    const PriceTable q = price_schedule(V, e);
    for (std::size_t b = 0; b < e.nb(); ++b) {
        if (e.grids.b[b] <= 0.0) continue;
        for (std::size_t k = 0; k < e.nk(); ++k) {
            EXPECT_NEAR(q.q(0, b, k), 0.2 / 1.04, 1e-15);
            EXPECT_NEAR(q.q(1, b, k), 0.8 / 1.04, 1e-15);
            EXPECT_NEAR(q.default_prob(1, b, k), 0.2, 1e-15);
        }
    }
}

TEST(PriceSchedule, MatchesBreakEvenFormula) {
    // Enumeration against the break-even formula on a random default pattern.
    const Economy e = small_economy(SqrtForm{0.3});
    std::mt19937_64 gen(5);
    std::bernoulli_distribution coin(0.4);
    ValueTable V(e.nz(), e.nb(), e.nk());
    for (double& x : V.data()) x = coin(gen) ? 0.0 : 1.0;
    const PriceTable q = price_schedule(V, e);
    for (std::size_t z = 0; z < e.nz(); ++z)
        for (std::size_t b = 0; b < e.nb(); ++b)
            for (std::size_t k = 0; k < e.nk(); ++k) {
                double pi = 0.0;
                for (std::size_t zn = 0; zn < e.nz(); ++zn)
                    if (V(zn, b, k) == 0.0) pi += e.chain.prob(z, zn);
                const double bn = e.grids.b[b], L = 2 * 0.3 * std::sqrt(e.grids.k[k]);
                double want = 1.0 / 1.04;
                if (bn > 0.0 && pi > 0.0) want = std::min(want, (bn * (1 - pi) + L * pi) / (bn * 1.04));
                EXPECT_NEAR(q.q(z, b, k), want, 1e-14);
            }
}
