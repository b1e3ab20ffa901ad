#include "dualdebt/pricing.hpp"

#include <stdexcept>

#include "dualdebt/parallel.hpp"

namespace dualdebt {

PriceQuote break_even_price(double b_next, double liquidation, double default_prob, double rho) {
    if (!(default_prob >= 0.0 && default_prob <= 1.0)) throw DomainError("break_even_price: default_prob outside [0,1]");
    const double risk_free = 1.0 / (1.0 + rho);
    if (b_next <= 0.0 || default_prob == 0.0) return {risk_free, false};
    if (liquidation > b_next) return {risk_free, true};
    const double q = (b_next * (1.0 - default_prob) + liquidation * default_prob) / (b_next * (1.0 + rho));
    return {q < risk_free ? q : risk_free, false};
}

PriceQuote break_even_price(double b_next, double k_next, double default_prob, const ModelParams& p) {
    return break_even_price(b_next, liquidation_value(k_next, p.liquidation), default_prob, p.rho);
}

PriceTable price_schedule(const ValueTable& V, const Economy& econ) {
    const std::size_t nz = econ.nz(), nb = econ.nb(), nk = econ.nk();
    if (V.dim0() != nz || V.dim1() != nb || V.dim2() != nk) throw std::invalid_argument("price_schedule: shape mismatch");
    PriceTable t{Array3<double>(nz, nb, nk), Array3<double>(nz, nb, nk), Array3<unsigned char>(nz, nb, nk)};
    parallel_for(nz, [&](std::size_t z) {
        for (std::size_t b = 0; b < nb; ++b) {
            for (std::size_t k = 0; k < nk; ++k) {
                double pd = 0.0;
                for (std::size_t zn = 0; zn < nz; ++zn) {
                    if (V(zn, b, k) == 0.0) pd += econ.chain.prob(z, zn);
                }
                if (pd > 1.0) pd = 1.0;
                const PriceQuote quote = break_even_price(econ.grids.b[b], econ.L(k), pd, econ.params.rho);
                t.q(z, b, k) = quote.q;
                t.default_prob(z, b, k) = pd;
                t.capped(z, b, k) = quote.capped ? 1 : 0;
            }
        }
    });
    return t;
}

PriceTable price_schedule(const ValueTable& V, const ShockChain& chain, const Grids& grids, const ModelParams& p) {
    return price_schedule(V, make_economy(p, chain, grids));
}

}  // namespace dualdebt
