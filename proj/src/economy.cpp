#include "dualdebt/economy.hpp"

#include <cmath>

#include "dualdebt/variants.hpp"

namespace dualdebt {

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Base: return "base";
        case ModelKind::Exogenous: return "exogenous";
        case ModelKind::Adjustment: return "adjustment";
    }
    return "unknown";
}

void ExogenousModelParams::validate() const {
    ModelParams shadow;
    shadow.tau = tau;
    shadow.beta = beta;
    shadow.rho = rho;
    shadow.b_lo = b_lo;
    shadow.b_hi = b_hi;
    shadow.validate();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool reachable(double k, double kp, double delta) {
    return kp >= (1.0 - delta) * k - 1e-12 * (1.0 + k);
}

Economy production_economy(ModelKind kind, const ModelParams& p, double psi, const ShockChain& chain,
                           const Grids& grids) {
    p.validate();
    if (!(psi >= 0.0)) throw ParamError("psi", "must be >= 0");
    Economy e;
    e.kind = kind;
    e.params = p;
    e.psi = psi;
    e.chain = chain;
    e.grids = grids;
    const std::size_t nk = grids.k.size();
    e.resources.resize(chain.size() * nk);
    for (std::size_t z = 0; z < chain.size(); ++z) {
        for (std::size_t k = 0; k < nk; ++k) e.resources[z * nk + k] = resources(chain.states[z], grids.k[k], p);
    }
    e.liquidation.resize(nk);
    for (std::size_t k = 0; k < nk; ++k) e.liquidation[k] = liquidation_value(grids.k[k], p.liquidation);
    e.outlay.assign(nk * nk, kInf);
    const AdjustmentCostSpec spec{psi};
    for (std::size_t k = 0; k < nk; ++k) {
        for (std::size_t kp = 0; kp < nk; ++kp) {
            const double kv = grids.k[k];
            const double kpv = grids.k[kp];
            if (!reachable(kv, kpv, p.delta)) continue;
            if (kind == ModelKind::Base) {
                e.outlay[k * nk + kp] = kpv;
            } else {
                if (kv == 0.0 && kpv > 0.0 && psi > 0.0) continue;  // cost undefined: not an admissible action
                const double cost = (kv == 0.0) ? 0.0 : adjustment_cost(kv, kpv, p.delta, spec);
                e.outlay[k * nk + kp] = kpv + cost;
            }
        }
    }
    return e;
}

}  // namespace

Economy make_economy(const ModelParams& p, const ShockChain& chain, const Grids& grids) {
    return production_economy(ModelKind::Base, p, 0.0, chain, grids);
}

Economy make_economy(const ModelParams& p, const AdjustmentCostSpec& spec, const ShockChain& chain,
                     const Grids& grids) {
    return production_economy(ModelKind::Adjustment, p, spec.psi, chain, grids);
}

Economy make_economy(const ExogenousModelParams& p, const ShockChain& chain, const Grids& grids) {
    p.validate();
    if (grids.k.size() != 1 || grids.k[0] != 0.0) throw DomainError("exogenous model expects the single k = 0 node");
    Economy e;
    e.kind = ModelKind::Exogenous;
    e.params.tau = p.tau;
    e.params.beta = p.beta;
    e.params.rho = p.rho;
    e.params.b_lo = p.b_lo;
    e.params.b_hi = p.b_hi;
    e.params.liquidation = Proportional{0.0};
    e.chain = chain;
    e.grids = grids;
    e.resources = chain.states;
    e.liquidation = {0.0};
    e.outlay = {0.0};
    return e;
}

Grids build_exogenous_grids(const ExogenousModelParams& p, const ShockChain& chain, std::size_t b_size,
                            std::size_t v_size, std::optional<double> v_max) {
    p.validate();
    if (b_size < 2 && p.b_lo < p.b_hi) throw ParamError("b_size", "must be >= 2");
    if (v_size < 2) throw ParamError("v_size", "must be >= 2");
    Grids g;
    g.k = {0.0};
    g.b = bond_grid(p.b_lo, p.b_hi, b_size);
    const double top = v_max ? *v_max : (chain.z_bar + p.b_hi - p.b_lo) / (1.0 - p.beta);
    if (!(top > 0.0)) throw ParamError("v_max", "must be > 0");
    g.v = uniform_grid(0.0, top, v_size);
    for (std::size_t i = 0; i < g.b.size(); ++i) {
        if (g.b[i] == 0.0) g.b_zero = i;
    }
    return g;
}

}  // namespace dualdebt
