#include "dualdebt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dualdebt {

namespace {

void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw ParamError(field, what);
}

double max_gap(const std::vector<double>& x) {
    double g = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) g = std::max(g, x[i] - x[i - 1]);
    return g;
}

}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(A) && A > 0.0, "A", "must be > 0");
    require(alpha > 0.0 && alpha < 1.0, "alpha", "must lie in (0,1)");
    require(tau >= 0.0 && tau < 1.0, "tau", "must lie in [0,1)");
    require(delta > 0.0 && delta <= 1.0, "delta", "must lie in (0,1]");
    require(beta > 0.0 && beta < 1.0, "beta", "must lie in (0,1)");
    require(std::isfinite(rho) && rho > 0.0, "rho", "must be > 0");
    require(std::isfinite(b_lo) && b_lo <= 0.0, "b_lo", "must be <= 0");
    require(std::isfinite(b_hi) && b_hi >= 0.0, "b_hi", "must be >= 0 and finite");
    require(tau + (1.0 - tau) / (1.0 + rho) >= beta, "beta",
            "tau + (1 - tau)/(1 + rho) >= beta is required");
    if (const auto* prop = std::get_if<Proportional>(&liquidation)) {
        require(prop->lambda >= 0.0 && prop->lambda <= 1.0, "liquidation.lambda", "must lie in [0,1]");
    } else {
        const auto& sq = std::get<SqrtForm>(liquidation);
        require(std::isfinite(sq.nu) && sq.nu > 0.0, "liquidation.nu", "must be > 0");
    }
}

double ShockChain::expected_state(std::size_t i) const {
    double e = 0.0;
    for (std::size_t j = 0; j < states.size(); ++j) e += prob(i, j) * states[j];
    return e;
}

ShockChain build_shock_chain(const std::vector<double>& states, const std::vector<std::vector<double>>& transition) {
    if (states.empty()) throw ParamError("states", "must be non-empty");
    if (transition.size() != states.size()) throw ParamError("transition", "must have one row per state");
    ShockChain c;
    c.states = states;
    c.transition.reserve(states.size() * states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!std::isfinite(states[i]) || states[i] < 0.0) {
            throw ParamError("states[" + std::to_string(i) + "]", "must be finite and >= 0");
        }
        const auto& row = transition[i];
        const std::string field = "transition[" + std::to_string(i) + "]";
        if (row.size() != states.size()) throw ParamError(field, "row length must equal the number of states");
        double sum = 0.0;
        for (double pij : row) {
            if (!std::isfinite(pij) || pij < 0.0) throw ParamError(field, "entries must be >= 0");
            sum += pij;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            std::ostringstream os;
            os.precision(12);
            os << "row sums to " << sum << ", not 1";
            throw ParamError(field, os.str());
        }
        c.transition.insert(c.transition.end(), row.begin(), row.end());
    }
    c.z_bar = *std::max_element(states.begin(), states.end());
    return c;
}

double Grids::k_cell() const { return max_gap(k); }
double Grids::b_cell() const { return max_gap(b); }
double Grids::v_cell() const { return max_gap(v); }

double production(double z, double k, const ModelParams& p) {
    if (!(k >= 0.0) || !(z >= 0.0)) throw DomainError("production: z and k must be >= 0");
    if (k == 0.0) return 0.0;
    return z * p.A * std::pow(k, p.alpha);
}

double resources(double z, double k, const ModelParams& p) {
    return (1.0 - p.tau) * production(z, k, p) + (1.0 - p.delta * (1.0 - p.tau)) * k;
}

double liquidation_value(double k_next, const LiquidationSpec& spec) {
    if (!(k_next >= 0.0)) throw DomainError("liquidation_value: k' must be >= 0");
    if (const auto* prop = std::get_if<Proportional>(&spec)) return prop->lambda * k_next;
    return 2.0 * std::get<SqrtForm>(spec).nu * std::sqrt(k_next);
}

double budget_residual(double z, double b, double k, double b_next, double k_next, double q, const ModelParams& p) {
    return resources(z, k, p) + (p.tau + (1.0 - p.tau) * q) * b_next - k_next - b;
}

double default_v_max(const ModelParams& p, const ShockChain& chain, double k_max) {
    const double payout = (1.0 - p.tau) * chain.z_bar * p.A * std::pow(k_max, p.alpha) + p.tau * p.delta * k_max + p.b_hi;
    return payout / (1.0 - p.beta);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = hi;
    return g;
}

std::vector<double> bond_grid(double b_lo, double b_hi, std::size_t n) {
    if (b_lo > 0.0 || b_hi < 0.0 || b_lo > b_hi) throw DomainError("bond_grid: need b_lo <= 0 <= b_hi");
    if (b_lo == b_hi) return {0.0};
    if (n < 2) throw DomainError("bond_grid: at least 2 nodes required");
    if (b_lo == 0.0 || b_hi == 0.0) return uniform_grid(b_lo, b_hi, n);
    if (n < 3) throw DomainError("bond_grid: at least 3 nodes required when b_lo < 0 < b_hi");
    // Split the intervals between the two signs so that 0 is an exact node.
    const std::size_t intervals = n - 1;
    auto below = static_cast<std::size_t>(std::lround(static_cast<double>(intervals) * (-b_lo) / (b_hi - b_lo)));
    below = std::clamp<std::size_t>(below, 1, intervals - 1);
    std::vector<double> g = uniform_grid(b_lo, 0.0, below + 1);
    const std::vector<double> upper = uniform_grid(0.0, b_hi, intervals - below + 1);
    g.insert(g.end(), upper.begin() + 1, upper.end());
    return g;
}

std::vector<double> capital_grid(const GridSizes& sizes) {
    if (sizes.k < 2) throw ParamError("k_size", "must be >= 2");
    if (!(sizes.k_max > 0.0)) throw ParamError("k_max", "must be > 0");
    if (sizes.k_spacing == Spacing::Uniform) return uniform_grid(0.0, sizes.k_max, sizes.k);
    if (!(sizes.k_growth > 0.0)) throw ParamError("k_growth", "must be > 0");
    std::vector<double> g(sizes.k);
    const double g_last = std::pow(1.0 + sizes.k_growth, static_cast<double>(sizes.k - 1)) - 1.0;
    for (std::size_t i = 0; i < sizes.k; ++i) {
        g[i] = sizes.k_max * (std::pow(1.0 + sizes.k_growth, static_cast<double>(i)) - 1.0) / g_last;
    }
    g.back() = sizes.k_max;
    return g;
}

Grids build_grids(const ModelParams& p, const ShockChain& chain, const GridSizes& sizes) {
    if (sizes.b < 2 && p.b_lo < p.b_hi) throw ParamError("b_size", "must be >= 2");
    if (sizes.v < 2) throw ParamError("v_size", "must be >= 2");
    Grids g;
    g.k = capital_grid(sizes);
    g.b = bond_grid(p.b_lo, p.b_hi, sizes.b);
    const double v_max = sizes.v_max ? *sizes.v_max : default_v_max(p, chain, sizes.k_max);
    if (!(v_max > 0.0)) throw ParamError("v_max", "must be > 0");
    g.v = uniform_grid(0.0, v_max, sizes.v);
    g.b_zero = static_cast<std::size_t>(std::find(g.b.begin(), g.b.end(), 0.0) - g.b.begin());
    return g;
}

}  // namespace dualdebt
