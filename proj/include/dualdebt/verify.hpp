#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dualdebt/dual.hpp"

namespace dualdebt {

struct CheckResult {
    std::string name;
    bool pass = false;
    bool applicable = true;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst = 0.0;      // largest observed error or ratio
    double tolerance = 0.0;
    std::string detail;
};

// V(z,b2,k) - V(z,b1,k) >= b1 - b2 - slack for b1 > b2 on non-default states.
CheckResult check_value_slope(const Equilibrium& eq, double slack = 1e-9);
// q(z,.,k') non-increasing in b' on b' >= 0.
CheckResult check_price_monotone(const Equilibrium& eq, double slack = 1e-9);
CheckResult check_nonnegative_debt(const Equilibrium& eq);
// ModerateCapital states follow (k*, b*, d*) within one grid cell per coordinate.
CheckResult check_moderate_policy(const Equilibrium& eq);
// V(z, B(z,k,v), k) = v within one v-cell where B lies between b_lo and the last solvent b node, and the inverse of B
// reproduces V at the b nodes within one v-cell.
CheckResult check_duality(const Equilibrium& eq);
CheckResult check_bellman_residual(const Equilibrium& eq, double tol);
CheckResult check_convergence_rate(const Equilibrium& eq);
CheckResult check_uniqueness(const Equilibrium& eq, double tol);

// Every check above; tol is the solver tolerance the artifact was produced with.
std::vector<CheckResult> verify_equilibrium(const Equilibrium& eq, double tol);

// Piecewise-linear V(z, b, k) in b at fixed (z, k); b is clamped to the grid.
double interpolate_in_b(const ValueTable& V, const Grids& grids, std::size_t z, double b, std::size_t k);

}  // namespace dualdebt
