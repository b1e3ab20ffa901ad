#include "dualdebt/primal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dualdebt/parallel.hpp"

namespace dualdebt {

ContinuationData make_continuation(const ValueTable& v, const PriceTable& q, const Economy& econ) {
    const std::size_t nz = econ.nz(), nb = econ.nb(), nk = econ.nk();
    if (v.dim0() != nz || v.dim1() != nb || v.dim2() != nk || !q.q.same_shape(v)) {
        throw std::invalid_argument("make_continuation: shape mismatch");
    }
    ContinuationData c{Array3<double>(nz, nb, nk), Array3<double>(nz, nb, nk)};
    const double beta = econ.params.beta;
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t b = 0; b < nb; ++b) {
            for (std::size_t k = 0; k < nk; ++k) {
                double e = 0.0;
                for (std::size_t zn = 0; zn < nz; ++zn) e += econ.chain.prob(z, zn) * v(zn, b, k);
                c.expected(z, b, k) = beta * e;
                c.revenue(z, b, k) = econ.revenue_rate(q.q(z, b, k)) * econ.grids.b[b];
            }
        }
    }
    return c;
}

PolicyChoice best_policy(const ContinuationData& cont, const Economy& econ, std::size_t z, double b, std::size_t k) {
    PolicyChoice best;
    const double R = econ.R(z, k);
    for (std::size_t bp = 0; bp < econ.nb(); ++bp) {
        for (std::size_t kp = 0; kp < econ.nk(); ++kp) {
            if (!econ.admissible(k, kp)) continue;
            const double d = R + cont.revenue(z, bp, kp) - econ.cost(k, kp) - b;
            if (d < 0.0) continue;
            const double obj = d + cont.expected(z, bp, kp);
            if (!best.feasible() || obj > best.objective) {
                best.b_next = static_cast<long>(bp);
                best.k_next = static_cast<long>(kp);
                best.dividend = d;
                best.objective = obj;
            }
        }
    }
    return best;
}

namespace {

double value_of(const PolicyChoice& c) {
    if (!c.feasible()) return 0.0;
    return c.objective > kValueFloor ? c.objective : kValueFloor;
}

}  // namespace

ValueTable primal_operator(const ValueTable& v, const Economy& econ) {
    for (double x : v.data()) {
        if (!(x >= 0.0)) throw DomainError("primal_operator: v must be >= 0");
    }
    const ContinuationData cont = make_continuation(v, price_schedule(v, econ), econ);
    ValueTable out(econ.nz(), econ.nb(), econ.nk());
    parallel_for(econ.nz() * econ.nk(), [&](std::size_t zk) {
        const std::size_t z = zk / econ.nk(), k = zk % econ.nk();
        for (std::size_t b = 0; b < econ.nb(); ++b) out(z, b, k) = value_of(best_policy(cont, econ, z, econ.grids.b[b], k));
    });
    return out;
}

ValueTable primal_operator(const ValueTable& v, const ShockChain& chain, const Grids& grids, const ModelParams& p) {
    return primal_operator(v, make_economy(p, chain, grids));
}

ResidualReport bellman_residual(const ValueTable& V, const PriceTable& q, const Economy& econ) {
    const ContinuationData cont = make_continuation(V, q, econ);
    Array3<double> resid(econ.nz(), econ.nb(), econ.nk());
    parallel_for(econ.nz() * econ.nk(), [&](std::size_t zk) {
        const std::size_t z = zk / econ.nk(), k = zk % econ.nk();
        for (std::size_t b = 0; b < econ.nb(); ++b) {
            const double rhs = value_of(best_policy(cont, econ, z, econ.grids.b[b], k));
            resid(z, b, k) = std::abs(V(z, b, k) - rhs);
        }
    });
    ResidualReport r;
    for (std::size_t z = 0; z < econ.nz(); ++z) {
        for (std::size_t b = 0; b < econ.nb(); ++b) {
            for (std::size_t k = 0; k < econ.nk(); ++k) {
                if (resid(z, b, k) > r.max_abs) r = {resid(z, b, k), z, b, k};
            }
        }
    }
    return r;
}

ResidualReport bellman_residual(const ValueTable& V, const PriceTable& q, const ShockChain& chain, const Grids& grids,
                                const ModelParams& p) {
    return bellman_residual(V, q, make_economy(p, chain, grids));
}

NonContractionReport noncontraction_demo(const NonContractionInputs& in) {
    auto fail = [](const std::string& what) { throw PreconditionError("noncontraction_demo: " + what); };
    if (!(in.nu > 0.0)) fail("nu > 0 violated");
    if (!(in.eps > 0.0)) fail("eps > 0 violated");
    if (!(in.b_hi > 0.0)) fail("b_hi > 0 violated");
    if (!(in.k >= 0.0)) fail("k >= 0 violated");
    if (!(in.rho >= 0.0)) fail("rho >= 0 violated");
    if (!(in.beta > 0.0 && in.beta < 1.0)) fail("0 < beta < 1 violated");
    if (!(in.delta > 0.0 && in.delta <= 1.0)) fail("0 < delta <= 1 violated");
    if (!(in.z >= 0.0 && in.A > 0.0 && in.alpha > 0.0 && in.alpha < 1.0)) fail("production parameters out of range");

    const double kp = std::pow(in.nu / (1.0 + in.rho), 2);
    const double undepreciated = (1.0 - in.delta) * in.k;
    if (!(kp >= undepreciated)) {
        std::ostringstream os;
        os.precision(12);
        os << "(nu/(1+rho))^2 >= (1-delta)k violated: " << kp << " < " << undepreciated;
        fail(os.str());
    }
    // The first closed form needs the liquidation value at the maximizer to fit under the debt cap.
    const double recovery = 2.0 * in.nu * std::sqrt(kp);
    if (!(in.b_hi >= recovery)) fail("b_hi >= 2 nu sqrt((nu/(1+rho))^2) violated");

    const double F = in.k == 0.0 ? 0.0 : in.z * in.A * std::pow(in.k, in.alpha);
    const double base = F + undepreciated - in.b;
    const double sv1 = base + kp;
    const double sv2 = base + in.beta * in.eps + in.b_hi / (1.0 + in.rho) - undepreciated;
    if (!(sv1 > 0.0)) {
        std::ostringstream os;
        os.precision(12);
        os << "positivity F + (1-delta)k - b + (nu/(1+rho))^2 > 0 violated: " << sv1;
        fail(os.str());
    }

    NonContractionReport r;
    r.norm_v_diff = in.eps;
    r.norm_Sv_diff = in.beta * in.eps + in.b_hi / (1.0 + in.rho) - undepreciated - kp;
    r.witness_z = in.z;
    r.witness_b = in.b;
    r.witness_k = in.k;
    r.Sv1 = sv1;
    r.Sv2 = sv2;
    r.k_next_part1 = kp;
    r.positivity_margin = sv1;
    r.verdict = r.norm_Sv_diff > r.norm_v_diff;
    return r;
}

}  // namespace dualdebt
