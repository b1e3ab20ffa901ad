#include "dualdebt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dualdebt {

namespace {

CheckResult finish(CheckResult r) {
    r.pass = r.violations == 0;
    return r;
}

bool has_labels(const Economy& e) {
    return e.kind == ModelKind::Base || (e.kind == ModelKind::Adjustment && e.psi == 0.0);
}

}  // namespace

double interpolate_in_b(const ValueTable& V, const Grids& grids, std::size_t z, double b, std::size_t k) {
    const auto& g = grids.b;
    if (g.size() == 1 || b <= g.front()) return V(z, 0, k);
    if (b >= g.back()) return V(z, g.size() - 1, k);
    const auto i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), b) - g.begin()) - 1;
    const double t = (b - g[i]) / (g[i + 1] - g[i]);
    return V(z, i, k) + t * (V(z, i + 1, k) - V(z, i, k));
}

CheckResult check_value_slope(const Equilibrium& eq, double slack) {
    const Economy& e = eq.econ;
    CheckResult r;
    r.name = "value_slope";
    r.tolerance = slack;
    for (std::size_t z = 0; z < e.nz(); ++z)
        for (std::size_t k = 0; k < e.nk(); ++k)
            for (std::size_t i2 = 0; i2 < e.nb(); ++i2) {
                if (eq.policy.b_index(z, i2, k) < 0) continue;
                for (std::size_t i1 = i2 + 1; i1 < e.nb(); ++i1) {
                    if (eq.policy.b_index(z, i1, k) < 0) continue;
                    ++r.checked;
                    const double short_by = (e.grids.b[i1] - e.grids.b[i2]) - (eq.V(z, i2, k) - eq.V(z, i1, k));
                    r.worst = std::max(r.worst, short_by);
                    if (short_by > slack) ++r.violations;
                }
            }
    return finish(r);
}

CheckResult check_price_monotone(const Equilibrium& eq, double slack) {
    const Economy& e = eq.econ;
    CheckResult r;
    r.name = "price_monotone";
    r.tolerance = slack;
    for (std::size_t z = 0; z < e.nz(); ++z)
        for (std::size_t kp = 0; kp < e.nk(); ++kp)
            for (std::size_t bp = e.grids.b_zero; bp + 1 < e.nb(); ++bp) {
                ++r.checked;
                const double rise = eq.q.q(z, bp + 1, kp) - eq.q.q(z, bp, kp);
                r.worst = std::max(r.worst, rise);
                if (rise > slack) ++r.violations;
            }
    return finish(r);
}

CheckResult check_nonnegative_debt(const Equilibrium& eq) {
    CheckResult r;
    r.name = "nonnegative_debt";
    const auto& bi = eq.policy.b_index.data();
    const auto& bn = eq.policy.b_next.data();
    for (std::size_t i = 0; i < bi.size(); ++i) {
        if (bi[i] < 0) continue;
        ++r.checked;
        if (bn[i] < 0.0) {
            ++r.violations;
            r.worst = std::max(r.worst, -bn[i]);
        }
    }
    return finish(r);
}

CheckResult check_moderate_policy(const Equilibrium& eq) {
    CheckResult r;
    r.name = "moderate_policy";
    if (!has_labels(eq.econ)) {
        r.applicable = false;
        r.pass = true;
        r.detail = "no case labels for this model";
        return r;
    }
    r.checked = eq.report.moderate_states;
    r.violations = eq.report.moderate_mismatches.size();
    r.tolerance = eq.report.tol_k;
    for (const auto& m : eq.report.moderate_mismatches) r.worst = std::max({r.worst, m.dk, m.db, m.dd});
    std::ostringstream os;
    os << "tol_k=" << eq.report.tol_k << " tol_b=" << eq.report.tol_b << " tol_d=" << eq.report.tol_d;
    r.detail = os.str();
    return finish(r);
}

CheckResult check_duality(const Equilibrium& eq) {
    const Economy& e = eq.econ;
    const Grids& g = e.grids;
    CheckResult r;
    r.name = "duality_round_trip";
    r.tolerance = g.v_cell();
    const double b_first = g.b.front();
    for (std::size_t z = 0; z < e.nz(); ++z)
        for (std::size_t k = 0; k < e.nk(); ++k) {
            // valid range: up to the last solvent b node at (z, k)
            double b_last = b_first - 1.0;
            for (std::size_t i = 0; i < e.nb(); ++i)
                if (eq.V(z, i, k) > 0.0) b_last = g.b[i];
            for (std::size_t j = 0; j < e.nv(); ++j) {
                const double B = eq.B.B(z, k, j);
                if (!eq.B.present(z, k, j) || B < b_first || B > b_last) continue;
                ++r.checked;
                const double err = std::abs(interpolate_in_b(eq.V, g, z, B, k) - g.v[j]);
                r.worst = std::max(r.worst, err);
                if (err > r.tolerance) ++r.violations;
            }
        }
    const ValueTable back = monotone_invert(eq.B, g);
    for (std::size_t z = 0; z < e.nz(); ++z)
        for (std::size_t i = 0; i < e.nb(); ++i)
            for (std::size_t k = 0; k < e.nk(); ++k) {
                const double v = eq.V(z, i, k);
                if (v <= 0.0 || v > g.v_max()) continue;
                ++r.checked;
                const double err = std::abs(back(z, i, k) - v);
                r.worst = std::max(r.worst, err);
                if (err > r.tolerance) ++r.violations;
            }
    return finish(r);
}

CheckResult check_bellman_residual(const Equilibrium& eq, double tol) {
    CheckResult r;
    r.name = "bellman_residual";
    r.tolerance = 10.0 * tol;
    const ResidualReport rep = bellman_residual(eq.V, eq.q, eq.econ);
    r.checked = eq.V.size();
    r.worst = rep.max_abs;
    r.violations = rep.max_abs <= r.tolerance ? 0 : 1;
    std::ostringstream os;
    os << "at (z=" << rep.z << ", b=" << rep.b << ", k=" << rep.k << ")";
    r.detail = os.str();
    return finish(r);
}

CheckResult check_convergence_rate(const Equilibrium& eq) {
    const ConvergenceDiagnostics& d = eq.diagnostics;
    CheckResult r;
    r.name = "convergence_rate";
    r.tolerance = d.theta_bound + d.slack;
    if (d.phi_norm_gaps.size() < d.burn_in + 2) {
        r.applicable = false;
        r.pass = d.converged;
        r.detail = "too few iterations after burn-in";
        return r;
    }
    r.checked = d.phi_norm_gaps.size() - d.burn_in - 1;
    r.worst = d.empirical_rate;
    r.violations = (d.converged && d.empirical_rate <= r.tolerance) ? 0 : 1;
    return finish(r);
}

CheckResult check_uniqueness(const Equilibrium& eq, double tol) {
    CheckResult r;
    r.name = "uniqueness";
    r.tolerance = 10.0 * tol;
    if (!eq.diagnostics.uniqueness_gap) {
        r.applicable = false;
        r.pass = true;
        r.detail = "second initialization not run";
        return r;
    }
    r.checked = 1;
    r.worst = *eq.diagnostics.uniqueness_gap;
    r.violations = r.worst <= r.tolerance ? 0 : 1;
    return finish(r);
}

std::vector<CheckResult> verify_equilibrium(const Equilibrium& eq, double tol) {
    return {check_convergence_rate(eq), check_uniqueness(eq, tol),      check_bellman_residual(eq, tol),
            check_duality(eq),          check_value_slope(eq),          check_price_monotone(eq),
            check_nonnegative_debt(eq), check_moderate_policy(eq)};
}

}  // namespace dualdebt
