#pragma once

#include <cstddef>
#include <vector>

#include "dualdebt/array3.hpp"
#include "dualdebt/economy.hpp"
#include "dualdebt/pricing.hpp"

namespace dualdebt {

enum class CaseLabel : unsigned char { HighCapital, ModerateCapital, LowCapital, Default, Unclassified };

const char* to_string(CaseLabel label);

struct FeasibilityMask {
    Array3<unsigned char> feasible;  // [z][b][k]
    std::vector<double> b_lo_of;     // [z][k]; NaN when no grid b is feasible
    std::vector<double> b_hi_of;     // [z][k]
};

struct BondRevenue {
    double value = 0.0;
    std::size_t b_index = 0;
};

struct Targets {
    std::vector<std::size_t> k_star_index;  // [z]
    std::vector<double> k_star;             // [z]
    std::vector<std::size_t> b_star_index;  // [z]
    std::vector<double> b_star;             // [z]
    std::vector<double> k_star_autarky;     // [z], closed form
    std::vector<double> N_of;               // [z][k']
    std::vector<std::size_t> N_arg;         // [z][k'], b' index
};

struct Policy {
    Array3<long> b_index;       // [z][b][k], -1 on default states
    Array3<long> k_index;
    Array3<double> b_next;
    Array3<double> k_next;
    Array3<double> dividend;
    Array3<double> investment;
    Array3<double> q_paid;
    Array3<CaseLabel> label;
};

struct ModerateMismatch {
    std::size_t z = 0, b = 0, k = 0;
    double dk = 0.0, db = 0.0, dd = 0.0;
};

struct PolicyReport {
    std::size_t default_states = 0;
    std::size_t moderate_states = 0;
    std::vector<ModerateMismatch> moderate_mismatches;
    double tol_k = 0.0, tol_b = 0.0, tol_d = 0.0;
    std::size_t low_capital_states = 0;
    std::size_t low_capital_positive_dividend = 0;     // d > 0
    std::size_t low_capital_dividend_beyond_grid = 0;  // d > one k-cell plus one b-cell
    std::size_t high_capital_states = 0;
    std::size_t high_capital_minimal_investment = 0;   // k' is the smallest admissible node
    std::size_t negative_b_next = 0;
    double max_budget_error = 0.0;
};

struct PolicyExtraction {
    Policy policy;
    PolicyReport report;
};

// max over (b', k') grid with k' >= (1-delta)k of [tau + (1-tau) q] b' - k' (minus adjustment costs when present)
double max_debt_revenue_S(std::size_t z, std::size_t k, const PriceTable& q, const Economy& econ);

FeasibilityMask feasible_set(const PriceTable& q, const Economy& econ);

// max over b' in [0, b_hi] of [tau + (1-tau) q - beta] b'; ties go to the smallest b'
BondRevenue bond_revenue_N(std::size_t z, std::size_t k_next, const PriceTable& q, const Economy& econ);

// Grid argmax of beta(1-tau) E_z F(z',k') - [1 - beta + beta delta (1-tau)] k' + N(z,k'); ties go to the smallest k'.
std::size_t capital_target(std::size_t z, const PriceTable& q, const Economy& econ);

// Same maximand with N = 0.
std::size_t autarky_grid_target(std::size_t z, const Economy& econ);

// (alpha beta A (1-tau) E_z z' / (1 - beta + delta beta (1-tau)))^(1/(1-alpha))
double autarky_target(std::size_t z, const ShockChain& chain, const ModelParams& p);

Targets compute_targets(const PriceTable& q, const Economy& econ);

// d* = R(z,k) + N(z,k*) + beta b* - k* - b
double dividend_target(std::size_t z, double b, std::size_t k, const Targets& t, const Economy& econ);

CaseLabel classify_state(std::size_t z, double b, std::size_t k, bool feasible, const Targets& t, const Economy& econ);

// Per-state Bellman argmax with case labels; targets are used for labels on the base model only.
PolicyExtraction policy_extract(const ValueTable& V, const PriceTable& q, const Economy& econ);

// No-debt value function V_a[z][k] by plain value iteration (b = b' = 0).
std::vector<double> autarky_values(const Economy& econ, double tol = 1e-12, std::size_t max_iter = 100000);

}  // namespace dualdebt
