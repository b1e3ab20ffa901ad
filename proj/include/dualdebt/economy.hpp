#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "dualdebt/model.hpp"

namespace dualdebt {

enum class ModelKind { Base, Exogenous, Adjustment };

const char* to_string(ModelKind kind);

// Cash flow z is paid directly by the shock chain; there is no capital and no liquidation recovery.
struct ExogenousModelParams {
    double tau = 0.2;
    double beta = 0.96;
    double rho = 0.04;
    double b_lo = -1.0;
    double b_hi = 2.0;

    void validate() const;
};

// Psi(k, k') = psi/2 * ((k' - (1-delta)k)/k)^2 * k
struct AdjustmentCostSpec {
    double psi = 0.0;
};

// Grid-level description of a model: the pieces the solver core varies on.
struct Economy {
    ModelKind kind = ModelKind::Base;
    ModelParams params;  // exogenous models use only tau, beta, rho, b_lo, b_hi
    double psi = 0.0;
    ShockChain chain;
    Grids grids;
    std::vector<double> resources;    // [z][k]
    std::vector<double> liquidation;  // [k']
    std::vector<double> outlay;       // [k][k'], k' plus adjustment cost; +inf when not admissible

    std::size_t nz() const { return chain.size(); }
    std::size_t nb() const { return grids.b.size(); }
    std::size_t nk() const { return grids.k.size(); }
    std::size_t nv() const { return grids.v.size(); }

    double R(std::size_t z, std::size_t k) const { return resources[z * nk() + k]; }
    double L(std::size_t kp) const { return liquidation[kp]; }
    double cost(std::size_t k, std::size_t kp) const { return outlay[k * nk() + kp]; }
    bool admissible(std::size_t k, std::size_t kp) const {
        return cost(k, kp) < std::numeric_limits<double>::infinity();
    }
    double risk_free_price() const { return 1.0 / (1.0 + params.rho); }
    // tau + (1 - tau) q
    double revenue_rate(double q) const { return params.tau + (1.0 - params.tau) * q; }
};

Economy make_economy(const ModelParams& p, const ShockChain& chain, const Grids& grids);
Economy make_economy(const ModelParams& p, const AdjustmentCostSpec& spec, const ShockChain& chain, const Grids& grids);
Economy make_economy(const ExogenousModelParams& p, const ShockChain& chain, const Grids& grids);

// Grids for the exogenous model: a single k = 0 node. Default v_max = (z_bar + b_hi - b_lo)/(1 - beta).
Grids build_exogenous_grids(const ExogenousModelParams& p, const ShockChain& chain, std::size_t b_size,
                            std::size_t v_size, std::optional<double> v_max = std::nullopt);

}  // namespace dualdebt
