#include "dualdebt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dualdebt/parallel.hpp"
#include "dualdebt/variants.hpp"

namespace dualdebt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in [0,1) from the top 53 bits.
double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::size_t nearest(const std::vector<double>& grid, double x) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), x);
    if (it == grid.begin()) return 0;
    if (it == grid.end()) return grid.size() - 1;
    const auto i = static_cast<std::size_t>(it - grid.begin());
    return (x - grid[i - 1] <= grid[i] - x) ? i - 1 : i;
}

std::size_t draw_next(const ShockChain& chain, std::size_t z, double u) {
    double cum = 0.0;
    for (std::size_t j = 0; j < chain.size(); ++j) {
        cum += chain.prob(z, j);
        if (u < cum) return j;
    }
    for (std::size_t j = chain.size(); j-- > 0;) {
        if (chain.prob(z, j) > 0.0) return j;
    }
    return z;
}

double exact_outlay(const Economy& econ, double k, double k_next) {
    switch (econ.kind) {
        case ModelKind::Exogenous: return 0.0;
        case ModelKind::Base: return k_next;
        case ModelKind::Adjustment:
            if (k == 0.0 && k_next > 0.0 && econ.psi > 0.0) return std::numeric_limits<double>::infinity();
            return k_next + (k == 0.0 ? 0.0 : adjustment_cost(k, k_next, econ.params.delta, AdjustmentCostSpec{econ.psi}));
    }
    return k_next;
}

double exact_resources(const Economy& econ, double z, double k) {
    return econ.kind == ModelKind::Exogenous ? z : resources(z, k, econ.params);
}

bool has_targets(const Equilibrium& eq) {
    return eq.econ.kind == ModelKind::Base || (eq.econ.kind == ModelKind::Adjustment && eq.econ.psi == 0.0);
}

}  // namespace

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path) { return splitmix64(splitmix64(seed) + path); }

StartState default_start(const Equilibrium& eq) {
    StartState s;
    if (has_targets(eq)) {
        const Targets t = compute_targets(eq.q, eq.econ);
        s.b = t.b_star[0];
        s.k = t.k_star[0];
    } else {
        s.k = eq.econ.grids.k[eq.econ.nk() / 2];
    }
    return s;
}

Panel simulate_paths(const Equilibrium& eq, std::size_t n_paths, std::size_t horizon, std::uint64_t seed,
                     const StartState& start) {
    if (n_paths < 1 || horizon < 1) throw std::invalid_argument("simulate_paths: n_paths and horizon must be >= 1");
    const Economy& econ = eq.econ;
    if (start.z_index >= econ.nz()) throw std::invalid_argument("simulate_paths: start shock index out of range");
    std::vector<std::vector<PanelRecord>> per_path(n_paths);

    parallel_for(n_paths, [&](std::size_t path) {
        std::mt19937_64 gen(path_seed(seed, path));
        std::vector<PanelRecord>& out = per_path[path];
        std::size_t z = start.z_index;
        double b = start.b, k = start.k;
        for (std::size_t t = 0; t < horizon; ++t) {
            PanelRecord r;
            r.path = static_cast<std::uint32_t>(path);
            r.t = static_cast<std::uint32_t>(t);
            r.z_index = static_cast<std::uint32_t>(z);
            r.z = econ.chain.states[z];
            r.b = b;
            r.k = k;
            const std::size_t ib = nearest(econ.grids.b, b), ik = nearest(econ.grids.k, k);
            const long bp = eq.policy.b_index(z, ib, ik);
            r.equity = eq.V(z, ib, ik);
            bool dflt = bp < 0 || r.equity == 0.0;
            if (!dflt) {
                const auto kp = static_cast<std::size_t>(eq.policy.k_index(z, ib, ik));
                r.b_next = econ.grids.b[static_cast<std::size_t>(bp)];
                r.k_next = econ.grids.k[kp];
                r.q_paid = eq.q.q(z, static_cast<std::size_t>(bp), kp);
                r.dividend = exact_resources(econ, r.z, k) + econ.revenue_rate(r.q_paid) * r.b_next -
                             exact_outlay(econ, k, r.k_next) - b;
                r.investment = econ.kind == ModelKind::Exogenous ? 0.0 : r.k_next - (1.0 - econ.params.delta) * k;
                dflt = !(r.dividend >= 0.0);
            }
            if (dflt) {
                r.b_next = r.k_next = r.dividend = r.investment = r.q_paid = 0.0;
                r.defaulted = true;
                out.push_back(r);
                break;
            }
            out.push_back(r);
            b = r.b_next;
            k = r.k_next;
            z = draw_next(econ.chain, z, unit(gen));
        }
    });

    Panel panel;
    panel.seed = seed;
    panel.n_paths = n_paths;
    panel.horizon = horizon;
    for (auto& recs : per_path) panel.records.insert(panel.records.end(), recs.begin(), recs.end());
    return panel;
}

namespace {

Moments moments(const std::vector<double>& x) {
    Moments m;
    m.n = x.size();
    if (x.empty()) return m;
    double s = 0.0;
    for (double v : x) s += v;
    m.mean = s / static_cast<double>(x.size());
    if (x.size() < 2) return m;
    double ss = 0.0;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
    return m;
}

double mean_of(const std::vector<double>& x) { return x.empty() ? 0.0 : moments(x).mean; }

}  // namespace

PanelStats panel_stats(const Panel& panel) {
    if (panel.records.empty()) throw std::invalid_argument("panel_stats: empty panel");
    PanelStats s;
    s.paths = panel.n_paths;
    s.records = panel.records.size();
    std::size_t n_states = 0;
    for (const auto& r : panel.records) n_states = std::max<std::size_t>(n_states, r.z_index + 1);
    std::vector<double> lev, inv, yld;
    std::vector<std::vector<double>> lev_z(n_states), inv_z(n_states), yld_z(n_states);
    std::vector<std::size_t> count_z(n_states, 0);
    for (const auto& r : panel.records) {
        if (r.defaulted) {
            ++s.defaults;
            continue;
        }
        ++count_z[r.z_index];
        const double debt = r.q_paid * r.b_next;
        if (debt + r.k != 0.0) {
            lev.push_back(debt / (debt + r.k));
            lev_z[r.z_index].push_back(lev.back());
        }
        if (r.k > 0.0) {
            inv.push_back(r.investment / r.k);
            inv_z[r.z_index].push_back(inv.back());
        }
        if (r.equity > 0.0) {
            yld.push_back(r.dividend / r.equity);
            yld_z[r.z_index].push_back(yld.back());
        }
    }
    s.default_frequency = static_cast<double>(s.defaults) / static_cast<double>(std::max<std::size_t>(1, s.paths));
    s.default_hazard = static_cast<double>(s.defaults) / static_cast<double>(s.records);
    s.leverage = moments(lev);
    s.investment_rate = moments(inv);
    s.dividend_yield = moments(yld);
    for (std::size_t z = 0; z < n_states; ++z) {
        s.by_state.push_back({z, count_z[z], mean_of(lev_z[z]), mean_of(inv_z[z]), mean_of(yld_z[z])});
    }
    return s;
}

}  // namespace dualdebt
