// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dualdebt/io.hpp"
#include "dualdebt/parallel.hpp"
#include "dualdebt/primal.hpp"
#include "dualdebt/sim.hpp"
#include "dualdebt/variants.hpp"
#include "dualdebt/verify.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace dualdebt;
using namespace testing_support;

namespace {

constexpr double kClosedFormTol = 1e-9;
constexpr double kRateSlack = 0.02;
constexpr double kSolverTol = 1e-8;
constexpr double kPropertySlack = 1e-9;
constexpr double kOracleRelTol = 1e-12;
constexpr double kPresentValueRelTol = 1e-6;
constexpr double kBudgetTol = 1e-9;
constexpr int kSamples = 50;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmtd(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

const Equilibrium& desk() {
    static const Equilibrium eq = [] {
        SolverOptions opt;
        opt.tol = kSolverTol;
        opt.slack = kRateSlack;
        return solve_equilibrium(desk_economy(), opt);
    }();
    return eq;
}

// Lemma-level properties of the dual operator on random bond tables.
struct PropertyCounts {
    std::size_t monotone = 0, reward = 0, growth = 0, discount = 0, discount_both_present = 0;
    std::size_t monotone_n = 0, reward_n = 0, growth_n = 0, discount_n = 0;
    double discount_worst = 0.0;
};

BondTable random_bump(const BondTable& f, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 0.7);
    BondTable g = f;
    for (std::size_t z = 0; z < f.B.dim0(); ++z)
        for (std::size_t k = 0; k < f.B.dim1(); ++k) {
            double c = u(gen);
            for (std::size_t j = 0; j < f.B.dim2(); ++j) {
                c = std::max(0.0, c - 0.1 * u(gen));
                g.B(z, k, j) += c;
            }
        }
    return g;
}

PropertyCounts operator_properties(const Economy& e, const PhiWeights& w, std::uint64_t seed) {
    PropertyCounts c;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> scale(0.01, 2.0);
    for (int s = 0; s < kSamples; ++s) {
        const BondTable f = random_bonds(e, gen);
        const BondTable tf = dual_operator(f, e);

        const BondTable tg = dual_operator(random_bump(f, gen), e);
        for (std::size_t i = 0; i < tf.B.size(); ++i, ++c.monotone_n)
            if (tf.B.data()[i] > tg.B.data()[i] + kPropertySlack) ++c.monotone;

        const ValueTable V = monotone_invert(f, e.grids);
        const ContinuationData cont = make_continuation(V, price_schedule(V, e), e);
        for (std::size_t z = 0; z < e.nz(); ++z)
            for (std::size_t k = 0; k < e.nk(); ++k) {
                const double bound = w.phi0(e.grids.k[k]);
                for (const DualAction& a : dual_actions(cont, e, z, k)) {
                    ++c.reward_n;
                    if (a.cap > bound + kPropertySlack) ++c.reward;  // reward(v) <= cap for every v
                    if (a.cap >= e.params.b_lo) {
                        ++c.growth_n;
                        if (w.phi0(e.grids.k[a.k_next]) > (1 + w.epsilon) * bound + kPropertySlack) ++c.growth;
                    }
                }
            }

        const double a = scale(gen);
        BondTable shifted = f;
        for (std::size_t z = 0; z < e.nz(); ++z)
            for (std::size_t k = 0; k < e.nk(); ++k)
                for (std::size_t j = 0; j < e.nv(); ++j) shifted.B(z, k, j) += a * w.phi0(e.grids.k[k]);
        const BondTable ts = dual_operator(shifted, e);
        for (std::size_t z = 0; z < e.nz(); ++z)
            for (std::size_t k = 0; k < e.nk(); ++k)
                for (std::size_t j = 0; j < e.nv(); ++j) {
                    ++c.discount_n;
                    const double excess = ts.B(z, k, j) - (tf.B(z, k, j) + w.theta * a * w.phi0(e.grids.k[k]));
                    if (excess > kPropertySlack) {
                        ++c.discount;
                        if (tf.present(z, k, j) && ts.present(z, k, j)) ++c.discount_both_present;
                        c.discount_worst = std::max(c.discount_worst, excess / (a * w.phi0(e.grids.k[k])));
                    }
                }
    }
    return c;
}

std::string describe(const PropertyCounts& c) {
    std::ostringstream os;
    os << "monotonicity " << c.monotone << "/" << c.monotone_n << ", reward bound " << c.reward << "/" << c.reward_n
       << ", growth " << c.growth << "/" << c.growth_n << ", discounting " << c.discount << "/" << c.discount_n;
    if (c.discount)
        os << " (" << c.discount_both_present << " at nodes present in both images, worst excess "
           << fmtd(c.discount_worst) << " a*phi)";
    return os.str();
}

bool clean(const PropertyCounts& c) { return c.monotone + c.reward + c.growth + c.discount == 0; }

bool prop1(const Equilibrium& eq, std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    for (const CheckResult& r : {check_value_slope(eq, kPropertySlack), check_price_monotone(eq, kPropertySlack),
                                 check_nonnegative_debt(eq)}) {
        os << r.name << " " << r.violations << "/" << r.checked << "; ";
        ok = ok && r.pass;
    }
    detail = os.str();
    return ok;
}

Outcome c1() {
    const NonContractionReport r = noncontraction_demo(NonContractionInputs{});
    const bool ok = std::abs(r.norm_Sv_diff - 0.98196) <= kClosedFormTol && r.norm_Sv_diff > r.norm_v_diff &&
                    std::abs(r.norm_v_diff - 0.001) <= kClosedFormTol && r.verdict;
    return {ok, "||Sv2-Sv1|| = " + fmtd(r.norm_Sv_diff) + " vs ||v2-v1|| = " + fmtd(r.norm_v_diff)};
}

Outcome c2() {
    const Economy e = desk_economy(6, 5, 4);
    const PhiWeights w = contraction_constants(0.015, e);
    bool rejected = false;
    try {
        contraction_constants(0.05, e);
    } catch (const DomainError&) {
        rejected = true;
    }
    const double want = 1.015 * 1.008 / 1.04;
    return {std::abs(w.theta - want) <= kClosedFormTol && std::abs(w.theta - 0.983769) < 1e-6 && rejected,
            "theta = " + std::to_string(w.theta) + ", epsilon 0.05 " + (rejected ? "rejected" : "accepted")};
}

Outcome c3() {
    const auto& d = desk().diagnostics;
    const bool ok = d.converged && d.empirical_rate <= d.theta_bound + kRateSlack;
    return {ok, "rate " + fmtd(d.empirical_rate) + " <= " + fmtd(d.theta_bound) + " + " + fmtd(kRateSlack) + " after " +
                    std::to_string(d.iterations) + " iterations"};
}

Outcome c4() {
    const auto& d = desk().diagnostics;
    const bool ok = d.uniqueness_gap && *d.uniqueness_gap <= 10 * kSolverTol;
    return {ok, "sup|V - V'| = " + (d.uniqueness_gap ? fmtd(*d.uniqueness_gap) : std::string("n/a"))};
}

Outcome c5() {
    const Economy e = desk_economy();
    const PropertyCounts c = operator_properties(e, contraction_constants(0.015, e), 501);
    return {clean(c), describe(c)};
}

Outcome c6() {
    std::string detail;
    const bool ok = prop1(desk(), detail);
    return {ok, detail};
}

Outcome c7() {
    const ModelParams p;
    const double closed = autarky_target(0, build_shock_chain({1.0}, {{1.0}}), p);
    bool ok = std::abs(closed - 10.8088) < 1e-4;
    std::ostringstream os;
    os << "closed form " << fmtd(closed) << "; ";

    ModelParams nd;
    nd.b_lo = 0.0;
    nd.b_hi = 0.0;
    const ShockChain c = desk_chain();
    const Equilibrium none = solve_equilibrium(make_economy(nd, c, build_grids(nd, c, sizes(50, 1, 40))));
    const Targets tn = compute_targets(none.q, none.econ);
    for (std::size_t z = 0; z < c.size(); ++z) {
        const double gap = std::abs(tn.k_star[z] - autarky_target(z, c, nd));
        ok = ok && gap <= none.econ.grids.k_cell();
        os << "no-debt z" << z << " |k*-k*_n| " << fmtd(gap) << "; ";
    }
    const Targets t = compute_targets(desk().q, desk().econ);
    for (std::size_t z = 0; z < c.size(); ++z) {
        const double grid_autarky = desk().econ.grids.k[autarky_grid_target(z, desk().econ)];
        ok = ok && t.k_star[z] >= grid_autarky;
        os << "z" << z << " k* " << fmtd(t.k_star[z]) << " >= " << fmtd(grid_autarky) << "; ";
    }
    return {ok, os.str()};
}

Outcome c8() {
    const PolicyReport& r = desk().report;
    return {r.moderate_mismatches.empty() && r.moderate_states > 0,
            std::to_string(r.moderate_mismatches.size()) + " mismatches over " + std::to_string(r.moderate_states) +
                " moderate-capital states"};
}

Outcome c9() {
    const CheckResult dual = check_duality(desk());
    const CheckResult res = check_bellman_residual(desk(), kSolverTol);
    return {dual.pass && res.pass, "round trip worst " + fmtd(dual.worst) + " (v-cell " + fmtd(dual.tolerance) + ", " +
                                       std::to_string(dual.violations) + " violations); residual " + fmtd(res.worst)};
}

Outcome c10() {
    const Economy e = desk_economy(8, 8, 8);
    std::mt19937_64 gen(1010);
    std::size_t nodes = 0, bad = 0;
    double worst = 0.0;
    std::vector<BondTable> inputs{initial_guess(e, InitialGuess::AutarkyCapacity), initial_guess(e, InitialGuess::DebtCap)};
    for (int i = 0; i < 8; ++i) inputs.push_back(random_bonds(e, gen));
    for (const BondTable& B : inputs) {
        const Oracle o = brute_force_dual(B, e);
        const BondTable T = dual_operator(B, e);
        for (std::size_t i = 0; i < T.B.size(); ++i, ++nodes) {
            const double d = rel_diff(T.B.data()[i], o.bonds.data()[i]);
            worst = std::max(worst, d);
            if (d > kOracleRelTol || T.present.data()[i] != o.present.data()[i]) ++bad;
        }
    }
    return {bad == 0, std::to_string(bad) + " mismatches over " + std::to_string(nodes) + " nodes, worst rel " + fmtd(worst)};
}

Outcome c11() {
    std::ostringstream os;
    bool ok = true;
    const ModelParams p;
    const ShockChain c = desk_chain();
    const Grids g = desk().econ.grids;
    const Equilibrium zero = solve_with_adjustment_costs(p, AdjustmentCostSpec{0.0}, c, g);
    const bool identical = zero.V == desk().V && zero.q.q == desk().q.q && zero.policy.b_index == desk().policy.b_index &&
                           zero.policy.k_index == desk().policy.k_index && zero.policy.dividend == desk().policy.dividend;
    ok = ok && identical;
    os << "psi=0 " << (identical ? "bit-identical" : "DIFFERS") << "; ";

    ExogenousModelParams xp;
    xp.b_lo = 0.0;
    xp.b_hi = 0.0;
    const ShockChain iid = build_shock_chain({0.8, 1.3}, {{0.5, 0.5}, {0.5, 0.5}});
    SolverOptions tight;
    tight.tol = 1e-10;
    const Equilibrium pv = solve_exogenous_cashflow(xp, iid, build_exogenous_grids(xp, iid, 1, 40), tight);
    double worst = 0.0;
    for (std::size_t z = 0; z < 2; ++z) {
        const double want = iid.states[z] + xp.beta * 1.05 / (1 - xp.beta);
        worst = std::max(worst, std::abs(pv.V(z, 0, 0) - want) / want);
    }
    ok = ok && worst <= kPresentValueRelTol;
    os << "exogenous PV rel err " << fmtd(worst) << "; ";

    // applicable subsets of criteria 3-6 on each variant
    const Equilibrium adj = solve_with_adjustment_costs(p, AdjustmentCostSpec{2.0}, c, build_grids(p, c, sizes(30, 24, 24)));
    ExogenousModelParams rp;
    rp.b_hi = 8.0;
    const ShockChain c3 = build_shock_chain({0.2, 1.0, 1.8}, {{0.6, 0.3, 0.1}, {0.2, 0.6, 0.2}, {0.1, 0.3, 0.6}});
    const Equilibrium exo = solve_exogenous_cashflow(rp, c3, build_exogenous_grids(rp, c3, 30, 30));
    for (const auto* eq : {&adj, &exo}) {
        const auto& d = eq->diagnostics;
        const bool rate = d.converged && d.empirical_rate <= d.theta_bound + kRateSlack;
        const bool uniq = d.uniqueness_gap && *d.uniqueness_gap <= 10 * kSolverTol;
        const PropertyCounts pc = operator_properties(eq->econ, eq->weights, 1100);
        std::string p1;
        const bool prop = prop1(*eq, p1);
        ok = ok && rate && uniq && clean(pc) && prop;
        os << to_string(eq->econ.kind) << ": rate " << fmtd(d.empirical_rate) << (rate ? "" : " FAIL") << ", uniqueness "
           << (uniq ? "ok" : "FAIL") << ", " << describe(pc) << ", " << p1;
    }
    return {ok, os.str()};
}

Outcome c12() {
    const Equilibrium& eq = desk();
    const Economy& e = eq.econ;
    StartState risky;
    risky.b = e.params.b_hi;
    risky.k = e.grids.k[2];
    std::size_t records = 0, budget_bad = 0, after_default = 0, defaults = 0;
    bool deterministic = true;
    for (const StartState& s : {default_start(eq), risky}) {
        set_jobs(1);
        const Panel a = simulate_paths(eq, 500, 100, 2024, s);
        set_jobs(4);
        const Panel b = simulate_paths(eq, 500, 100, 2024, s);
        set_jobs(0);
        deterministic = deterministic && panel_csv(a) == panel_csv(b);
        std::vector<bool> dead(a.n_paths, false);
        for (const PanelRecord& r : a.records) {
            ++records;
            if (dead[r.path]) ++after_default;
            if (r.defaulted) {
                dead[r.path] = true;
                ++defaults;
                continue;
            }
            const double d = budget_residual(r.z, r.b, r.k, r.b_next, r.k_next, r.q_paid, e.params);
            if (std::abs(d - r.dividend) > kBudgetTol || r.dividend < 0.0) ++budget_bad;
        }
    }
    return {budget_bad == 0 && after_default == 0 && deterministic,
            std::to_string(records) + " records, " + std::to_string(budget_bad) + " budget violations, " +
                std::to_string(defaults) + " defaults, " + std::to_string(after_default) +
                " records after default, jobs 1 vs 4 " + (deterministic ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"non-contraction of the primal operator", c1},
        {"contraction constants", c2},
        {"dual convergence rate", c3},
        {"uniqueness across initializations", c4},
        {"operator properties on random tables", c5},
        {"value slope, price monotonicity, nonnegative debt", c6},
        {"autarky capital target", c7},
        {"moderate-capital policy equals targets", c8},
        {"duality round trip and Bellman residual", c9},
        {"dual sweep equals brute force", c10},
        {"variants", c11},
        {"simulation integrity", c12},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu %s  %-50s %s [%.2fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
