#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <random>
#include <vector>

#include "dualdebt/dual.hpp"

namespace testing_support {

using namespace dualdebt;

inline ShockChain desk_chain() { return build_shock_chain({0.9, 1.1}, {{0.8, 0.2}, {0.2, 0.8}}); }

inline ModelParams desk_params() { return ModelParams{}; }

inline GridSizes sizes(std::size_t k, std::size_t b, std::size_t v) {
    GridSizes s;
    s.k = k;
    s.b = b;
    s.v = v;
    return s;
}

inline Economy desk_economy(std::size_t k = 50, std::size_t b = 40, std::size_t v = 40) {
    const ModelParams p = desk_params();
    const ShockChain c = desk_chain();
    return make_economy(p, c, build_grids(p, c, sizes(k, b, v)));
}

// Solved once per process; the desk solve takes a few seconds.
inline const Equilibrium& desk_equilibrium() {
    static const Equilibrium eq = solve_equilibrium(desk_economy());
    return eq;
}

// Random bond table, non-increasing in v, spanning a little beyond [b_lo, b_hi].
inline BondTable random_bonds(const Economy& e, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(e.params.b_lo - 0.5, e.params.b_hi + 0.5);
    BondTable B{Array3<double>(e.nz(), e.nk(), e.nv()), Array3<unsigned char>(e.nz(), e.nk(), e.nv())};
    std::vector<double> col(e.nv());
    for (std::size_t z = 0; z < e.nz(); ++z)
        for (std::size_t k = 0; k < e.nk(); ++k) {
            for (double& x : col) x = u(gen);
            std::sort(col.begin(), col.end(), std::greater<double>());
            for (std::size_t j = 0; j < e.nv(); ++j) {
                B.B(z, k, j) = col[j];
                B.present(z, k, j) = col[j] >= e.params.b_lo ? 1 : 0;
            }
        }
    return B;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace testing_support
