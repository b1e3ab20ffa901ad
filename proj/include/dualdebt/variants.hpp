#pragma once

#include "dualdebt/dual.hpp"
#include "dualdebt/economy.hpp"

namespace dualdebt {

// Psi(k, k') for k > 0; k = 0 is defined only for k' = 0.
double adjustment_cost(double k, double k_next, double delta, const AdjustmentCostSpec& spec);

// State (z, b); the single capital node is k = 0.
Equilibrium solve_exogenous_cashflow(const ExogenousModelParams& p, const ShockChain& chain, const Grids& grids,
                                     const SolverOptions& opt = {});

Equilibrium solve_with_adjustment_costs(const ModelParams& p, const AdjustmentCostSpec& spec, const ShockChain& chain,
                                        const Grids& grids, const SolverOptions& opt = {});

}  // namespace dualdebt
