#pragma once

#include <cstddef>
#include <string>

#include "dualdebt/economy.hpp"
#include "dualdebt/pricing.hpp"

namespace dualdebt {

class PreconditionError : public DomainError {
public:
    using DomainError::DomainError;
};

// Per-(z,b',k') pieces of the Bellman right-hand side for a given continuation and price table.
struct ContinuationData {
    Array3<double> expected;  // beta * E_z v(z', b', k')
    Array3<double> revenue;   // [tau + (1-tau) q(z,b',k')] * b'
};

ContinuationData make_continuation(const ValueTable& v, const PriceTable& q, const Economy& econ);

struct PolicyChoice {
    long b_next = -1;  // grid indices, -1 when the constraint set is empty
    long k_next = -1;
    double dividend = 0.0;
    double objective = 0.0;
    bool feasible() const { return b_next >= 0; }
};

// argmax over the (b', k') grid of d + beta E v subject to d >= 0; ties go to the smallest b', then smallest k'.
PolicyChoice best_policy(const ContinuationData& cont, const Economy& econ, std::size_t z, double b, std::size_t k);

ValueTable primal_operator(const ValueTable& v, const Economy& econ);
ValueTable primal_operator(const ValueTable& v, const ShockChain& chain, const Grids& grids, const ModelParams& p);

struct ResidualReport {
    double max_abs = 0.0;
    std::size_t z = 0, b = 0, k = 0;
};

ResidualReport bellman_residual(const ValueTable& V, const PriceTable& q, const Economy& econ);
ResidualReport bellman_residual(const ValueTable& V, const PriceTable& q, const ShockChain& chain, const Grids& grids,
                                const ModelParams& p);

struct NonContractionInputs {
    double nu = 0.1;
    double eps = 0.001;
    double b_hi = 1.0;
    double k = 0.01;
    double b = 0.0;
    double delta = 0.1;
    double rho = 0.0;
    double beta = 0.96;
    double z = 1.0;
    double A = 1.0;
    double alpha = 0.5;
};

struct NonContractionReport {
    double norm_v_diff = 0.0;
    double norm_Sv_diff = 0.0;
    double witness_z = 0.0, witness_b = 0.0, witness_k = 0.0;
    bool verdict = false;
    double Sv1 = 0.0;               // at the witness state
    double Sv2 = 0.0;
    double k_next_part1 = 0.0;      // maximizer (nu/(1+rho))^2 of the first closed form
    double positivity_margin = 0.0; // Sv1 at the witness, required > 0
};

// tau = 0 and a single deterministic shock z are imposed.
NonContractionReport noncontraction_demo(const NonContractionInputs& in);

}  // namespace dualdebt
