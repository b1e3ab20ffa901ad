#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dualdebt/array3.hpp"
#include "dualdebt/economy.hpp"
#include "dualdebt/equilibrium.hpp"
#include "dualdebt/pricing.hpp"
#include "dualdebt/primal.hpp"

namespace dualdebt {

// B[z][k][v]: largest debt b with V(z,b,k) >= v. Nodes below b_lo are absent but keep the
// unconstrained optimum, so the table is total and inverts without gaps.
struct BondTable {
    Array3<double> B;
    Array3<unsigned char> present;
};

struct PhiWeights {
    double eta = 0.0;
    double epsilon = 0.0;
    double theta = 0.0;
    double m_eps = 0.0;
    double slope = 0.0;  // (1-tau) z_bar A + tau delta; 0 for the exogenous model

    double phi0(double k) const { return slope * k + eta; }
};

double phi(double k, const PhiWeights& w);

// max over the grid of |f(z,k,v)| / phi0(k); f is indexed [z][k][v]
double phi_norm(const Array3<double>& f, const Grids& grids, const PhiWeights& w);

// Open interval of epsilon keeping theta below one.
std::pair<double, double> admissible_epsilon(double tau, double rho);
double default_epsilon(double tau, double rho);

PhiWeights contraction_constants(double epsilon, const ModelParams& p, const ShockChain& chain, const Grids& grids);
PhiWeights contraction_constants(double epsilon, const Economy& econ);

class NonMonotoneError : public DomainError {
public:
    NonMonotoneError(const std::string& what, std::size_t z, std::size_t k, std::size_t j)
        : DomainError(what), z(z), k(k), j(j) {}
    std::size_t z, k, j;
};

ValueTable monotone_invert(const BondTable& B, const Grids& grids);
BondTable monotone_invert_back(const ValueTable& V, const Grids& grids, double b_lo);

// One action (b', k') at a (z,k) node. cap = R(z,k) + revenue(b',k') - outlay(k,k'),
// continuation = beta E_z w(z',b',k'). Supports debt cap + min(0, continuation - v) at promised value v.
struct DualAction {
    std::size_t b_next = 0;
    std::size_t k_next = 0;
    double cap = 0.0;
    double continuation = 0.0;

    double reward(double v) const { return continuation >= v ? cap : cap + (continuation - v); }
};

std::vector<DualAction> dual_actions(const ContinuationData& cont, const Economy& econ, std::size_t z, std::size_t k);

struct DualSweep {
    BondTable bonds;    // T applied with continuation w
    ValueTable values;  // exact inverse of the swept bond function at the b nodes
};

DualSweep dual_sweep(const ValueTable& continuation, const Economy& econ);

BondTable dual_operator(const BondTable& B, const Economy& econ);
BondTable dual_operator(const BondTable& B, const ShockChain& chain, const Grids& grids, const ModelParams& p);

enum class InitialGuess { AutarkyCapacity, DebtCap };

BondTable initial_guess(const Economy& econ, InitialGuess kind);

struct SolverOptions {
    std::optional<double> epsilon;
    double tol = 1e-8;
    std::size_t max_iter = 5000;
    double slack = 0.02;
    std::size_t burn_in = 20;
    bool uniqueness_check = true;
};

struct ConvergenceDiagnostics {
    std::size_t iterations = 0;
    std::vector<double> phi_norm_gaps;
    std::vector<double> value_changes;  // sup-norm change of V per iteration
    double empirical_rate = 0.0;
    double theta_bound = 0.0;
    double slack = 0.0;
    std::size_t burn_in = 0;
    bool converged = false;
    std::optional<double> uniqueness_gap;  // sup |V - V'| against the second initialization
    std::size_t uniqueness_iterations = 0;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> gaps)
        : std::runtime_error(what), gaps(std::move(gaps)) {}
    std::vector<double> gaps;
};

struct FixedPoint {
    BondTable B;
    ValueTable V;
    ConvergenceDiagnostics diagnostics;
};

// Iterates the dual operator from the given start. Stops when the phi-norm gap of successive bond tables
// and the sup-norm change of the value function are both within tol.
FixedPoint iterate_dual(const Economy& econ, const PhiWeights& w, InitialGuess start, const SolverOptions& opt);

double empirical_rate(const std::vector<double>& gaps, std::size_t burn_in);

struct Equilibrium {
    Economy econ;
    PhiWeights weights;
    ValueTable V;
    BondTable B;
    PriceTable q;
    Policy policy;
    PolicyReport report;
    ConvergenceDiagnostics diagnostics;
};

Equilibrium solve_equilibrium(const Economy& econ, const SolverOptions& opt = {});
Equilibrium solve_equilibrium(const ModelParams& p, const ShockChain& chain, const Grids& grids,
                              const SolverOptions& opt = {});

double sup_distance(const ValueTable& a, const ValueTable& b);

}  // namespace dualdebt
