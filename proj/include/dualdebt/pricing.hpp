#pragma once

#include "dualdebt/array3.hpp"
#include "dualdebt/economy.hpp"
#include "dualdebt/model.hpp"

namespace dualdebt {

// V[z][b][k], exactly 0 on default states.
using ValueTable = Array3<double>;

// Feasible values are floored here so that exact zero always means default.
inline constexpr double kValueFloor = 1e-12;

struct PriceTable {
    Array3<double> q;              // [z][b'][k']
    Array3<double> default_prob;   // [z][b'][k']
    Array3<unsigned char> capped;  // [z][b'][k']
};

struct PriceQuote {
    double q = 0.0;
    bool capped = false;
};

PriceQuote break_even_price(double b_next, double liquidation, double default_prob, double rho);
PriceQuote break_even_price(double b_next, double k_next, double default_prob, const ModelParams& p);

PriceTable price_schedule(const ValueTable& V, const Economy& econ);
PriceTable price_schedule(const ValueTable& V, const ShockChain& chain, const Grids& grids, const ModelParams& p);

}  // namespace dualdebt
