#include "dualdebt/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dualdebt/parallel.hpp"

namespace dualdebt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double upper_epsilon(double tau, double rho) { return (1.0 + rho) / (1.0 + rho * tau) - 1.0; }

void check_epsilon(double epsilon, double tau, double rho) {
    const double hi = upper_epsilon(tau, rho);
    if (!(epsilon > 0.0 && epsilon < hi)) {
        std::ostringstream os;
        os.precision(12);
        os << "epsilon = " << epsilon << " outside the admissible interval (0, " << hi << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

double phi(double k, const PhiWeights& w) {
    if (!(k >= 0.0)) throw DomainError("phi: k must be >= 0");
    return w.phi0(k);
}

double phi_norm(const Array3<double>& f, const Grids& grids, const PhiWeights& w) {
    if (f.dim1() != grids.k.size()) throw std::invalid_argument("phi_norm: k dimension mismatch");
    double n = 0.0;
    for (std::size_t z = 0; z < f.dim0(); ++z) {
        for (std::size_t k = 0; k < f.dim1(); ++k) {
            const double weight = w.phi0(grids.k[k]);
            for (std::size_t v = 0; v < f.dim2(); ++v) n = std::max(n, std::abs(f(z, k, v)) / weight);
        }
    }
    return n;
}

std::pair<double, double> admissible_epsilon(double tau, double rho) { return {0.0, upper_epsilon(tau, rho)}; }

double default_epsilon(double tau, double rho) {
    const double hi = upper_epsilon(tau, rho);
    return 0.015 < hi ? 0.015 : 0.5 * hi;
}

PhiWeights contraction_constants(double epsilon, const ModelParams& p, const ShockChain& chain, const Grids&) {
    check_epsilon(epsilon, p.tau, p.rho);
    const double theta0 = p.tau + (1.0 - p.tau) / (1.0 + p.rho);
    // Largest single-period debt revenue less the smallest admissible repayment b_lo.
    const double eta1 = theta0 * p.b_hi - p.b_lo;
    const double a = (1.0 - p.tau) * chain.z_bar * p.A;
    const double slope_k = epsilon + p.delta * (1.0 - p.tau);
    double m = -eta1;
    if (a > 0.0) {
        const double kstar = std::pow(p.alpha * a / slope_k, 1.0 / (1.0 - p.alpha));
        m = slope_k * kstar - a * std::pow(kstar, p.alpha) - eta1;
    }
    PhiWeights w;
    w.epsilon = epsilon;
    w.theta = (1.0 + epsilon) * theta0;
    w.m_eps = m;
    w.slope = a + p.tau * p.delta;
    w.eta = std::max(eta1 + a, -m * w.slope / epsilon);
    return w;
}

PhiWeights contraction_constants(double epsilon, const Economy& econ) {
    if (econ.kind != ModelKind::Exogenous) return contraction_constants(epsilon, econ.params, econ.chain, econ.grids);
    const ModelParams& p = econ.params;
    check_epsilon(epsilon, p.tau, p.rho);
    const double theta0 = p.tau + (1.0 - p.tau) / (1.0 + p.rho);
    const double eta1 = theta0 * p.b_hi - p.b_lo;
    PhiWeights w;
    w.epsilon = epsilon;
    w.theta = (1.0 + epsilon) * theta0;
    w.m_eps = -eta1;
    w.slope = 0.0;
    w.eta = eta1 + econ.chain.z_bar;
    if (!(w.eta > 0.0)) w.eta = 1.0;
    return w;
}

ValueTable monotone_invert(const BondTable& B, const Grids& grids) {
    const std::size_t nz = B.B.dim0(), nk = B.B.dim1(), nv = B.B.dim2();
    if (nk != grids.k.size() || nv != grids.v.size()) throw std::invalid_argument("monotone_invert: shape mismatch");
    const std::size_t nb = grids.b.size();
    ValueTable V(nz, nb, nk);
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t k = 0; k < nk; ++k) {
            for (std::size_t j = 0; j + 1 < nv; ++j) {
                const double hi = B.B(z, k, j), lo = B.B(z, k, j + 1);
                if (!std::isfinite(hi) || lo > hi + 1e-12 * (1.0 + std::abs(hi))) {
                    std::ostringstream os;
                    os << "monotone_invert: B not non-increasing in v at (z=" << z << ", k=" << k << ", v=" << j << ")";
                    throw NonMonotoneError(os.str(), z, k, j);
                }
            }
            for (std::size_t i = 0; i < nb; ++i) {
                const double b = grids.b[i];
                // largest j with B_j >= b
                std::size_t count = 0;
                while (count < nv && B.B(z, k, count) >= b) ++count;
                double v = 0.0;
                if (count == 0) {
                    V(z, i, k) = 0.0;
                    continue;
                }
                const std::size_t j = count - 1;
                if (j + 1 == nv) {
                    v = grids.v[j];
                } else {
                    const double bj = B.B(z, k, j), bn = B.B(z, k, j + 1);
                    const double t = (bj - b) / (bj - bn);
                    v = grids.v[j] + t * (grids.v[j + 1] - grids.v[j]);
                }
                V(z, i, k) = std::max(v, kValueFloor);
            }
        }
    }
    return V;
}

BondTable monotone_invert_back(const ValueTable& V, const Grids& grids, double b_lo) {
    const std::size_t nz = V.dim0(), nb = V.dim1(), nk = V.dim2();
    if (nb != grids.b.size() || nk != grids.k.size()) throw std::invalid_argument("monotone_invert_back: shape mismatch");
    const std::size_t nv = grids.v.size();
    BondTable out{Array3<double>(nz, nk, nv), Array3<unsigned char>(nz, nk, nv)};
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t k = 0; k < nk; ++k) {
            std::size_t m = 0;
            for (std::size_t i = 0; i < nb; ++i) {
                const double cur = V(z, i, k);
                if (!(cur >= 0.0) || (i > 0 && cur > V(z, i - 1, k) + 1e-12 * (1.0 + V(z, i - 1, k)))) {
                    std::ostringstream os;
                    os << "monotone_invert_back: V not non-increasing in b at (z=" << z << ", b=" << i << ", k=" << k
                       << ")";
                    throw NonMonotoneError(os.str(), z, k, i);
                }
                if (cur > 0.0) m = i + 1;
            }
            for (std::size_t j = 0; j < nv; ++j) {
                const double v = grids.v[j];
                double B = 0.0;
                if (m == 0) {
                    B = grids.b[0] - 1.0 - v;
                } else if (v > V(z, 0, k)) {
                    B = grids.b[0] - (v - V(z, 0, k));
                } else {
                    std::size_t i = 0;
                    while (i + 1 < m && V(z, i + 1, k) >= v) ++i;
                    if (i + 1 == m) {
                        B = grids.b[i];
                    } else {
                        const double vi = V(z, i, k), vn = V(z, i + 1, k);
                        B = grids.b[i] + (vi - v) / (vi - vn) * (grids.b[i + 1] - grids.b[i]);
                    }
                }
                out.B(z, k, j) = B;
                out.present(z, k, j) = B >= b_lo ? 1 : 0;
            }
        }
    }
    return out;
}

std::vector<DualAction> dual_actions(const ContinuationData& cont, const Economy& econ, std::size_t z, std::size_t k) {
    std::vector<DualAction> acts;
    acts.reserve(econ.nb() * econ.nk());
    const double R = econ.R(z, k);
    for (std::size_t bp = 0; bp < econ.nb(); ++bp) {
        for (std::size_t kp = 0; kp < econ.nk(); ++kp) {
            if (!econ.admissible(k, kp)) continue;
            acts.push_back({bp, kp, R + cont.revenue(z, bp, kp) - econ.cost(k, kp), cont.expected(z, bp, kp)});
        }
    }
    return acts;
}

DualSweep dual_sweep(const ValueTable& continuation, const Economy& econ) {
    const std::size_t nz = econ.nz(), nb = econ.nb(), nk = econ.nk(), nv = econ.nv();
    const ContinuationData cont = make_continuation(continuation, price_schedule(continuation, econ), econ);
    DualSweep out{{Array3<double>(nz, nk, nv), Array3<unsigned char>(nz, nk, nv)}, ValueTable(nz, nb, nk)};
    const double b_lo = econ.params.b_lo;

    parallel_for(nz * nk, [&](std::size_t zk) {
        const std::size_t z = zk / nk, k = zk % nk;
        const std::vector<DualAction> acts = dual_actions(cont, econ, z, k);
        const std::size_t n = acts.size();
        std::vector<std::size_t> order(n);

        // Bond side: actions with continuation >= v keep their full cap; the rest pay the shortfall.
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return acts[a].continuation < acts[b].continuation; });
        std::vector<std::size_t> prefix_best(n);
        std::vector<double> suffix_cap(n + 1, kNegInf);
        for (std::size_t i = 0; i < n; ++i) {
            const DualAction& a = acts[order[i]];
            if (i == 0) {
                prefix_best[i] = order[i];
            } else {
                const DualAction& p = acts[prefix_best[i - 1]];
                prefix_best[i] = (a.cap + a.continuation > p.cap + p.continuation) ? order[i] : prefix_best[i - 1];
            }
        }
        for (std::size_t i = n; i-- > 0;) suffix_cap[i] = std::max(suffix_cap[i + 1], acts[order[i]].cap);
        std::size_t pos = 0;
        for (std::size_t j = 0; j < nv; ++j) {
            const double v = econ.grids.v[j];
            while (pos < n && acts[order[pos]].continuation < v) ++pos;
            double best = suffix_cap[pos];
            if (pos > 0) best = std::max(best, acts[prefix_best[pos - 1]].reward(v));
            out.bonds.B(z, k, j) = best;
            out.bonds.present(z, k, j) = best >= b_lo ? 1 : 0;
        }

        // Value side: V(b) = max over actions with cap >= b of (cap - b) + continuation.
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return acts[a].cap > acts[b].cap; });
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0) {
                prefix_best[i] = order[i];
            } else {
                const DualAction& a = acts[order[i]];
                const DualAction& p = acts[prefix_best[i - 1]];
                prefix_best[i] = (a.cap + a.continuation > p.cap + p.continuation) ? order[i] : prefix_best[i - 1];
            }
        }
        std::size_t count = n;
        for (std::size_t i = 0; i < nb; ++i) {
            const double b = econ.grids.b[i];
            while (count > 0 && acts[order[count - 1]].cap < b) --count;
            if (count == 0) {
                out.values(z, i, k) = 0.0;
                continue;
            }
            const DualAction& a = acts[prefix_best[count - 1]];
            out.values(z, i, k) = std::max((a.cap - b) + a.continuation, kValueFloor);
        }
    });
    return out;
}

BondTable dual_operator(const BondTable& B, const Economy& econ) {
    return dual_sweep(monotone_invert(B, econ.grids), econ).bonds;
}

BondTable dual_operator(const BondTable& B, const ShockChain& chain, const Grids& grids, const ModelParams& p) {
    return dual_operator(B, make_economy(p, chain, grids));
}

BondTable initial_guess(const Economy& econ, InitialGuess kind) {
    const std::size_t nz = econ.nz(), nk = econ.nk(), nv = econ.nv();
    BondTable B{Array3<double>(nz, nk, nv), Array3<unsigned char>(nz, nk, nv)};
    std::vector<double> va;
    if (kind == InitialGuess::AutarkyCapacity) va = autarky_values(econ);
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t k = 0; k < nk; ++k) {
            for (std::size_t j = 0; j < nv; ++j) {
                const double b = kind == InitialGuess::AutarkyCapacity ? std::max(va[z * nk + k] - econ.grids.v[j], 0.0)
                                                                       : econ.params.b_hi;
                B.B(z, k, j) = b;
                B.present(z, k, j) = b >= econ.params.b_lo ? 1 : 0;
            }
        }
    }
    return B;
}

double sup_distance(const ValueTable& a, const ValueTable& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("sup_distance: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

double empirical_rate(const std::vector<double>& gaps, std::size_t burn_in) {
    double rate = 0.0;
    for (std::size_t n = burn_in + 1; n < gaps.size(); ++n) {
        if (gaps[n - 1] > 0.0) rate = std::max(rate, gaps[n] / gaps[n - 1]);
    }
    return rate;
}

FixedPoint iterate_dual(const Economy& econ, const PhiWeights& w, InitialGuess start, const SolverOptions& opt) {
    FixedPoint fp;
    fp.B = initial_guess(econ, start);
    fp.V = monotone_invert(fp.B, econ.grids);
    ConvergenceDiagnostics& diag = fp.diagnostics;
    diag.theta_bound = w.theta;
    diag.slack = opt.slack;
    diag.burn_in = opt.burn_in;
    Array3<double> diff(econ.nz(), econ.nk(), econ.nv());
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        DualSweep s = dual_sweep(fp.V, econ);
        for (std::size_t i = 0; i < diff.size(); ++i) diff.data()[i] = s.bonds.B.data()[i] - fp.B.B.data()[i];
        const double gap = phi_norm(diff, econ.grids, w);
        const double dv = sup_distance(s.values, fp.V);
        diag.phi_norm_gaps.push_back(gap);
        diag.value_changes.push_back(dv);
        diag.iterations = it;
        fp.B = std::move(s.bonds);
        fp.V = std::move(s.values);
        if (gap <= opt.tol && dv <= opt.tol) {
            diag.converged = true;
            break;
        }
    }
    diag.empirical_rate = empirical_rate(diag.phi_norm_gaps, opt.burn_in);
    if (!diag.converged) {
        std::ostringstream os;
        os.precision(12);
        os << "dual iteration did not converge in " << opt.max_iter << " iterations; last phi-norm gap "
           << diag.phi_norm_gaps.back();
        throw ConvergenceError(os.str(), diag.phi_norm_gaps);
    }
    return fp;
}

Equilibrium solve_equilibrium(const Economy& econ, const SolverOptions& opt) {
    const double eps = opt.epsilon ? *opt.epsilon : default_epsilon(econ.params.tau, econ.params.rho);
    Equilibrium eq;
    eq.econ = econ;
    eq.weights = contraction_constants(eps, econ);
    FixedPoint fp = iterate_dual(econ, eq.weights, InitialGuess::AutarkyCapacity, opt);
    eq.diagnostics = std::move(fp.diagnostics);
    if (opt.uniqueness_check) {
        const FixedPoint other = iterate_dual(econ, eq.weights, InitialGuess::DebtCap, opt);
        eq.diagnostics.uniqueness_gap = sup_distance(fp.V, other.V);
        eq.diagnostics.uniqueness_iterations = other.diagnostics.iterations;
    }
    eq.V = std::move(fp.V);
    eq.B = std::move(fp.B);
    eq.q = price_schedule(eq.V, econ);
    PolicyExtraction ex = policy_extract(eq.V, eq.q, econ);
    eq.policy = std::move(ex.policy);
    eq.report = std::move(ex.report);
    return eq;
}

Equilibrium solve_equilibrium(const ModelParams& p, const ShockChain& chain, const Grids& grids,
                              const SolverOptions& opt) {
    return solve_equilibrium(make_economy(p, chain, grids), opt);
}

}  // namespace dualdebt
