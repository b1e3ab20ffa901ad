#include "dualdebt/variants.hpp"

namespace dualdebt {

double adjustment_cost(double k, double k_next, double delta, const AdjustmentCostSpec& spec) {
    if (!(spec.psi >= 0.0)) throw DomainError("adjustment_cost: psi must be >= 0");
    if (!(k >= 0.0) || !(k_next >= 0.0)) throw DomainError("adjustment_cost: capital must be >= 0");
    if (k == 0.0) {
        if (k_next == 0.0) return 0.0;
        throw DomainError("adjustment_cost: k = 0 with k' > 0 divides by zero");
    }
    const double rate = (k_next - (1.0 - delta) * k) / k;
    return 0.5 * spec.psi * rate * rate * k;
}

Equilibrium solve_exogenous_cashflow(const ExogenousModelParams& p, const ShockChain& chain, const Grids& grids,
                                     const SolverOptions& opt) {
    return solve_equilibrium(make_economy(p, chain, grids), opt);
}

Equilibrium solve_with_adjustment_costs(const ModelParams& p, const AdjustmentCostSpec& spec, const ShockChain& chain,
                                        const Grids& grids, const SolverOptions& opt) {
    return solve_equilibrium(make_economy(p, spec, chain, grids), opt);
}

}  // namespace dualdebt
