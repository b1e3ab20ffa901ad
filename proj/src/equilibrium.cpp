#include "dualdebt/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dualdebt/parallel.hpp"
#include "dualdebt/primal.hpp"

namespace dualdebt {

const char* to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::HighCapital: return "HighCapital";
        case CaseLabel::ModerateCapital: return "ModerateCapital";
        case CaseLabel::LowCapital: return "LowCapital";
        case CaseLabel::Default: return "Default";
        case CaseLabel::Unclassified: return "Unclassified";
    }
    return "Unknown";
}

double max_debt_revenue_S(std::size_t z, std::size_t k, const PriceTable& q, const Economy& econ) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t bp = 0; bp < econ.nb(); ++bp) {
        for (std::size_t kp = 0; kp < econ.nk(); ++kp) {
            if (!econ.admissible(k, kp)) continue;
            const double s = econ.revenue_rate(q.q(z, bp, kp)) * econ.grids.b[bp] - econ.cost(k, kp);
            best = std::max(best, s);
        }
    }
    return best;
}

FeasibilityMask feasible_set(const PriceTable& q, const Economy& econ) {
    const std::size_t nz = econ.nz(), nb = econ.nb(), nk = econ.nk();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    FeasibilityMask m{Array3<unsigned char>(nz, nb, nk), std::vector<double>(nz * nk, nan),
                      std::vector<double>(nz * nk, nan)};
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t k = 0; k < nk; ++k) {
            const double capacity = econ.R(z, k) + max_debt_revenue_S(z, k, q, econ);
            for (std::size_t b = 0; b < nb; ++b) {
                const bool ok = capacity >= econ.grids.b[b];
                m.feasible(z, b, k) = ok ? 1 : 0;
                if (!ok) continue;
                if (std::isnan(m.b_lo_of[z * nk + k])) m.b_lo_of[z * nk + k] = econ.grids.b[b];
                m.b_hi_of[z * nk + k] = econ.grids.b[b];
            }
        }
    }
    return m;
}

BondRevenue bond_revenue_N(std::size_t z, std::size_t k_next, const PriceTable& q, const Economy& econ) {
    BondRevenue best{0.0, econ.grids.b_zero};
    bool have = false;
    for (std::size_t bp = 0; bp < econ.nb(); ++bp) {
        const double b = econ.grids.b[bp];
        if (b < 0.0) continue;
        const double val = (econ.revenue_rate(q.q(z, bp, k_next)) - econ.params.beta) * b;
        if (!have || val > best.value) {
            best = {val, bp};
            have = true;
        }
    }
    return best;
}

namespace {

double expected_output(std::size_t z, double k_next, const Economy& econ) {
    double e = 0.0;
    for (std::size_t zn = 0; zn < econ.nz(); ++zn) {
        e += econ.chain.prob(z, zn) * production(econ.chain.states[zn], k_next, econ.params);
    }
    return e;
}

double target_maximand(std::size_t z, std::size_t kp, double N, const Economy& econ) {
    const ModelParams& p = econ.params;
    const double kv = econ.grids.k[kp];
    return p.beta * (1.0 - p.tau) * expected_output(z, kv, econ) -
           (1.0 - p.beta + p.beta * p.delta * (1.0 - p.tau)) * kv + N;
}

// Targets and case labels exist for the base model; a zero adjustment cost is the base model.
bool has_targets(const Economy& econ) {
    return econ.kind == ModelKind::Base || (econ.kind == ModelKind::Adjustment && econ.psi == 0.0);
}

void require_production(const Economy& econ, const char* what) {
    if (econ.kind == ModelKind::Exogenous) throw std::invalid_argument(std::string(what) + ": needs a production model");
}

}  // namespace

std::size_t capital_target(std::size_t z, const PriceTable& q, const Economy& econ) {
    require_production(econ, "capital_target");
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t kp = 0; kp < econ.nk(); ++kp) {
        const double val = target_maximand(z, kp, bond_revenue_N(z, kp, q, econ).value, econ);
        if (val > best_val) {
            best_val = val;
            best = kp;
        }
    }
    return best;
}

std::size_t autarky_grid_target(std::size_t z, const Economy& econ) {
    require_production(econ, "autarky_grid_target");
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t kp = 0; kp < econ.nk(); ++kp) {
        const double val = target_maximand(z, kp, 0.0, econ);
        if (val > best_val) {
            best_val = val;
            best = kp;
        }
    }
    return best;
}

double autarky_target(std::size_t z, const ShockChain& chain, const ModelParams& p) {
    const double ez = chain.expected_state(z);
    const double ratio = p.alpha * p.beta * p.A * (1.0 - p.tau) * ez / (1.0 - p.beta + p.delta * p.beta * (1.0 - p.tau));
    if (ratio <= 0.0) return 0.0;
    return std::pow(ratio, 1.0 / (1.0 - p.alpha));
}

Targets compute_targets(const PriceTable& q, const Economy& econ) {
    require_production(econ, "compute_targets");
    const std::size_t nz = econ.nz(), nk = econ.nk();
    Targets t;
    t.N_of.resize(nz * nk);
    t.N_arg.resize(nz * nk);
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t kp = 0; kp < nk; ++kp) {
            const BondRevenue n = bond_revenue_N(z, kp, q, econ);
            t.N_of[z * nk + kp] = n.value;
            t.N_arg[z * nk + kp] = n.b_index;
        }
        const std::size_t ks = capital_target(z, q, econ);
        t.k_star_index.push_back(ks);
        t.k_star.push_back(econ.grids.k[ks]);
        t.b_star_index.push_back(t.N_arg[z * nk + ks]);
        t.b_star.push_back(econ.grids.b[t.N_arg[z * nk + ks]]);
        t.k_star_autarky.push_back(autarky_target(z, econ.chain, econ.params));
    }
    return t;
}

double dividend_target(std::size_t z, double b, std::size_t k, const Targets& t, const Economy& econ) {
    const std::size_t ks = t.k_star_index[z];
    return econ.R(z, k) + t.N_of[z * econ.nk() + ks] + econ.params.beta * t.b_star[z] - t.k_star[z] - b;
}

CaseLabel classify_state(std::size_t z, double b, std::size_t k, bool feasible, const Targets& t, const Economy& econ) {
    if (!feasible) return CaseLabel::Default;
    if (!has_targets(econ)) return CaseLabel::Unclassified;
    if ((1.0 - econ.params.delta) * econ.grids.k[k] > t.k_star[z]) return CaseLabel::HighCapital;
    if (dividend_target(z, b, k, t, econ) >= 0.0) return CaseLabel::ModerateCapital;
    return CaseLabel::LowCapital;
}

PolicyExtraction policy_extract(const ValueTable& V, const PriceTable& q, const Economy& econ) {
    const std::size_t nz = econ.nz(), nb = econ.nb(), nk = econ.nk();
    PolicyExtraction out;
    Policy& pol = out.policy;
    pol.b_index = Array3<long>(nz, nb, nk, -1);
    pol.k_index = Array3<long>(nz, nb, nk, -1);
    pol.b_next = Array3<double>(nz, nb, nk);
    pol.k_next = Array3<double>(nz, nb, nk);
    pol.dividend = Array3<double>(nz, nb, nk);
    pol.investment = Array3<double>(nz, nb, nk);
    pol.q_paid = Array3<double>(nz, nb, nk);
    pol.label = Array3<CaseLabel>(nz, nb, nk, CaseLabel::Default);

    const ContinuationData cont = make_continuation(V, q, econ);
    parallel_for(nz * nk, [&](std::size_t zk) {
        const std::size_t z = zk / nk, k = zk % nk;
        for (std::size_t b = 0; b < nb; ++b) {
            const PolicyChoice c = best_policy(cont, econ, z, econ.grids.b[b], k);
            if (!c.feasible()) continue;
            const auto bp = static_cast<std::size_t>(c.b_next), kp = static_cast<std::size_t>(c.k_next);
            pol.b_index(z, b, k) = c.b_next;
            pol.k_index(z, b, k) = c.k_next;
            pol.b_next(z, b, k) = econ.grids.b[bp];
            pol.k_next(z, b, k) = econ.grids.k[kp];
            pol.dividend(z, b, k) = c.dividend;
            const double inv = econ.kind == ModelKind::Exogenous
                                   ? 0.0
                                   : econ.grids.k[kp] - (1.0 - econ.params.delta) * econ.grids.k[k];
            pol.investment(z, b, k) = std::max(0.0, inv);
            pol.q_paid(z, b, k) = q.q(z, bp, kp);
        }
    });

    PolicyReport& rep = out.report;
    rep.tol_k = econ.grids.k.size() > 1 ? econ.grids.k_cell() : 0.0;
    rep.tol_b = econ.grids.b.size() > 1 ? econ.grids.b_cell() : 0.0;
    rep.tol_d = rep.tol_k + rep.tol_b;
    const bool labelled = has_targets(econ);
    Targets targets;
    if (labelled) targets = compute_targets(q, econ);

    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t b = 0; b < nb; ++b) {
            for (std::size_t k = 0; k < nk; ++k) {
                const bool feasible = pol.b_index(z, b, k) >= 0;
                const double bv = econ.grids.b[b];
                const CaseLabel label = labelled ? classify_state(z, bv, k, feasible, targets, econ)
                                                 : (feasible ? CaseLabel::Unclassified : CaseLabel::Default);
                pol.label(z, b, k) = label;
                if (!feasible) {
                    ++rep.default_states;
                    continue;
                }
                const double bn = pol.b_next(z, b, k), kn = pol.k_next(z, b, k), d = pol.dividend(z, b, k);
                if (bn < 0.0) ++rep.negative_b_next;
                double recomputed = 0.0;
                if (econ.kind == ModelKind::Exogenous) {
                    recomputed = econ.chain.states[z] + econ.revenue_rate(pol.q_paid(z, b, k)) * bn - bv;
                } else {
                    const double psi_cost = econ.cost(k, static_cast<std::size_t>(pol.k_index(z, b, k))) - kn;
                    recomputed = budget_residual(econ.chain.states[z], bv, econ.grids.k[k], bn, kn, pol.q_paid(z, b, k),
                                                 econ.params) -
                                 psi_cost;
                }
                rep.max_budget_error = std::max(rep.max_budget_error, std::abs(recomputed - d));

                if (label == CaseLabel::ModerateCapital) {
                    ++rep.moderate_states;
                    const double dk = std::abs(kn - targets.k_star[z]);
                    const double db = std::abs(bn - targets.b_star[z]);
                    const double dd = std::abs(d - dividend_target(z, bv, k, targets, econ));
                    const double slack = 1e-9;
                    if (dk > rep.tol_k + slack || db > rep.tol_b + slack || dd > rep.tol_d + slack) {
                        rep.moderate_mismatches.push_back({z, b, k, dk, db, dd});
                    }
                } else if (label == CaseLabel::LowCapital) {
                    ++rep.low_capital_states;
                    if (d > 0.0) ++rep.low_capital_positive_dividend;
                    if (d > rep.tol_d) ++rep.low_capital_dividend_beyond_grid;
                } else if (label == CaseLabel::HighCapital) {
                    ++rep.high_capital_states;
                    std::size_t first = 0;
                    while (first < nk && !econ.admissible(k, first)) ++first;
                    if (static_cast<std::size_t>(pol.k_index(z, b, k)) == first) ++rep.high_capital_minimal_investment;
                }
            }
        }
    }
    return out;
}

std::vector<double> autarky_values(const Economy& econ, double tol, std::size_t max_iter) {
    const std::size_t nz = econ.nz(), nk = econ.nk();
    std::vector<double> v(nz * nk, 0.0), next(nz * nk, 0.0), ev(nz * nk, 0.0);
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t z = 0; z < nz; ++z) {
            for (std::size_t kp = 0; kp < nk; ++kp) {
                double e = 0.0;
                for (std::size_t zn = 0; zn < nz; ++zn) e += econ.chain.prob(z, zn) * v[zn * nk + kp];
                ev[z * nk + kp] = econ.params.beta * e;
            }
        }
        double change = 0.0;
        for (std::size_t z = 0; z < nz; ++z) {
            for (std::size_t k = 0; k < nk; ++k) {
                double best = -1.0;
                for (std::size_t kp = 0; kp < nk; ++kp) {
                    if (!econ.admissible(k, kp)) continue;
                    const double d = econ.R(z, k) - econ.cost(k, kp);
                    if (d < 0.0) continue;
                    best = std::max(best, d + ev[z * nk + kp]);
                }
                const double val = best < 0.0 ? 0.0 : std::max(best, kValueFloor);
                change = std::max(change, std::abs(val - v[z * nk + k]));
                next[z * nk + k] = val;
            }
        }
        v.swap(next);
        if (change <= tol * (1.0 + *std::max_element(v.begin(), v.end()))) return v;
    }
    throw std::runtime_error("autarky_values: value iteration did not converge");
}

}  // namespace dualdebt
