#include "dualdebt/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dualdebt {

using nlohmann::json;

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

namespace {

json rounded(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(round12(x));
    return a;
}

json table_json(const Array3<double>& t) {
    json a = json::array();
    for (std::size_t i = 0; i < t.dim0(); ++i) {
        json m = json::array();
        for (std::size_t j = 0; j < t.dim1(); ++j) {
            json row = json::array();
            for (std::size_t l = 0; l < t.dim2(); ++l) row.push_back(round12(t(i, j, l)));
            m.push_back(std::move(row));
        }
        a.push_back(std::move(m));
    }
    return a;
}

Array3<double> table_from_json(const json& a, std::size_t n0, std::size_t n1, std::size_t n2, const char* name) {
    Array3<double> t(n0, n1, n2);
    if (!a.is_array() || a.size() != n0) throw std::invalid_argument(std::string("equilibrium json: bad shape for ") + name);
    for (std::size_t i = 0; i < n0; ++i) {
        if (a[i].size() != n1) throw std::invalid_argument(std::string("equilibrium json: bad shape for ") + name);
        for (std::size_t j = 0; j < n1; ++j) {
            if (a[i][j].size() != n2) throw std::invalid_argument(std::string("equilibrium json: bad shape for ") + name);
            for (std::size_t l = 0; l < n2; ++l) t(i, j, l) = a[i][j][l].get<double>();
        }
    }
    return t;
}

}  // namespace

std::string value_csv(const ValueTable& V, const Economy& econ) {
    std::ostringstream os;
    os << "z,b,k,V\n";
    for (std::size_t z = 0; z < econ.nz(); ++z)
        for (std::size_t b = 0; b < econ.nb(); ++b)
            for (std::size_t k = 0; k < econ.nk(); ++k)
                os << fmt(econ.chain.states[z]) << ',' << fmt(econ.grids.b[b]) << ',' << fmt(econ.grids.k[k]) << ','
                   << fmt(V(z, b, k)) << '\n';
    return os.str();
}

std::string prices_csv(const PriceTable& q, const Economy& econ) {
    std::ostringstream os;
    os << "z,b_next,k_next,q,default_prob,capped\n";
    for (std::size_t z = 0; z < econ.nz(); ++z)
        for (std::size_t b = 0; b < econ.nb(); ++b)
            for (std::size_t k = 0; k < econ.nk(); ++k)
                os << fmt(econ.chain.states[z]) << ',' << fmt(econ.grids.b[b]) << ',' << fmt(econ.grids.k[k]) << ','
                   << fmt(q.q(z, b, k)) << ',' << fmt(q.default_prob(z, b, k)) << ','
                   << (q.capped(z, b, k) ? "true" : "false") << '\n';
    return os.str();
}

std::string bonds_csv(const BondTable& B, const Economy& econ) {
    std::ostringstream os;
    os << "z,k,v,B,present\n";
    for (std::size_t z = 0; z < econ.nz(); ++z)
        for (std::size_t k = 0; k < econ.nk(); ++k)
            for (std::size_t v = 0; v < econ.nv(); ++v)
                os << fmt(econ.chain.states[z]) << ',' << fmt(econ.grids.k[k]) << ',' << fmt(econ.grids.v[v]) << ','
                   << fmt(B.B(z, k, v)) << ',' << (B.present(z, k, v) ? "true" : "false") << '\n';
    return os.str();
}

std::string policy_csv(const Policy& pol, const Economy& econ) {
    std::ostringstream os;
    os << "z,b,k,b_next,k_next,dividend,investment,q_paid,case\n";
    for (std::size_t z = 0; z < econ.nz(); ++z)
        for (std::size_t b = 0; b < econ.nb(); ++b)
            for (std::size_t k = 0; k < econ.nk(); ++k) {
                os << fmt(econ.chain.states[z]) << ',' << fmt(econ.grids.b[b]) << ',' << fmt(econ.grids.k[k]) << ',';
                if (pol.b_index(z, b, k) < 0) {
                    os << ",,,,," << to_string(CaseLabel::Default) << '\n';
                    continue;
                }
                os << fmt(pol.b_next(z, b, k)) << ',' << fmt(pol.k_next(z, b, k)) << ',' << fmt(pol.dividend(z, b, k))
                   << ',' << fmt(pol.investment(z, b, k)) << ',' << fmt(pol.q_paid(z, b, k)) << ','
                   << to_string(pol.label(z, b, k)) << '\n';
            }
    return os.str();
}

std::string targets_csv(const Targets& t, const Economy& econ) {
    std::ostringstream os;
    os << "z,k_star,b_star,k_star_autarky\n";
    for (std::size_t z = 0; z < econ.nz(); ++z) {
        os << fmt(econ.chain.states[z]) << ',' << fmt(t.k_star[z]) << ',' << fmt(t.b_star[z]) << ','
           << fmt(t.k_star_autarky[z]) << '\n';
    }
    return os.str();
}

std::string panel_csv(const Panel& panel) {
    std::ostringstream os;
    os << "# generator=" << panel.generator << " seed=" << panel.seed << " paths=" << panel.n_paths
       << " horizon=" << panel.horizon << '\n';
    os << "path,t,z,b,k,b_next,k_next,dividend,investment,q_paid,defaulted\n";
    for (const auto& r : panel.records) {
        os << r.path << ',' << r.t << ',' << fmt(r.z) << ',' << fmt(r.b) << ',' << fmt(r.k) << ',' << fmt(r.b_next) << ','
           << fmt(r.k_next) << ',' << fmt(r.dividend) << ',' << fmt(r.investment) << ',' << fmt(r.q_paid) << ','
           << (r.defaulted ? "true" : "false") << '\n';
    }
    return os.str();
}

json diagnostics_json(const ConvergenceDiagnostics& d) {
    json j;
    j["iterations"] = d.iterations;
    j["converged"] = d.converged;
    j["phi_norm_gaps"] = rounded(d.phi_norm_gaps);
    j["value_changes"] = rounded(d.value_changes);
    j["empirical_rate"] = round12(d.empirical_rate);
    j["theta_bound"] = round12(d.theta_bound);
    j["slack"] = round12(d.slack);
    j["burn_in"] = d.burn_in;
    j["rate_within_bound"] = d.empirical_rate <= d.theta_bound + d.slack;
    j["uniqueness_gap"] = d.uniqueness_gap ? json(round12(*d.uniqueness_gap)) : json(nullptr);
    j["uniqueness_iterations"] = d.uniqueness_iterations;
    return j;
}

json equilibrium_json(const Equilibrium& eq, const RunConfig& cfg) {
    const Economy& e = eq.econ;
    json j;
    j["config"] = config_to_json(cfg);
    j["grids"] = {{"z", rounded(e.chain.states)}, {"b", rounded(e.grids.b)}, {"k", rounded(e.grids.k)}, {"v", rounded(e.grids.v)}};
    j["weights"] = {{"eta", round12(eq.weights.eta)},     {"epsilon", round12(eq.weights.epsilon)},
                    {"theta", round12(eq.weights.theta)}, {"m_eps", round12(eq.weights.m_eps)},
                    {"slope", round12(eq.weights.slope)}};
    j["V"] = table_json(eq.V);
    j["B"] = table_json(eq.B.B);
    j["q"] = table_json(eq.q.q);
    Array3<double> bn = eq.policy.b_next, kn = eq.policy.k_next;
    for (std::size_t i = 0; i < bn.size(); ++i) {
        if (eq.policy.b_index.data()[i] < 0) bn.data()[i] = kn.data()[i] = std::nan("");
    }
    json pol;
    pol["b_next"] = table_json(bn);
    pol["k_next"] = table_json(kn);
    pol["dividend"] = table_json(eq.policy.dividend);
    j["policy"] = pol;
    j["diagnostics"] = diagnostics_json(eq.diagnostics);
    return j;
}

Equilibrium equilibrium_from_json(const json& j, RunConfig* cfg_out) {
    const RunConfig cfg = parse_config(j.at("config"));
    Equilibrium eq;
    eq.econ = make_economy(cfg);
    const Economy& e = eq.econ;
    eq.weights = contraction_constants(cfg.solver.epsilon ? *cfg.solver.epsilon : default_epsilon(e.params.tau, e.params.rho), e);
    eq.V = table_from_json(j.at("V"), e.nz(), e.nb(), e.nk(), "V");
    eq.B.B = table_from_json(j.at("B"), e.nz(), e.nk(), e.nv(), "B");
    eq.B.present = Array3<unsigned char>(e.nz(), e.nk(), e.nv());
    for (std::size_t i = 0; i < eq.B.B.size(); ++i) eq.B.present.data()[i] = eq.B.B.data()[i] >= e.params.b_lo ? 1 : 0;
    eq.q = price_schedule(eq.V, e);
    PolicyExtraction ex = policy_extract(eq.V, eq.q, e);
    eq.policy = std::move(ex.policy);
    eq.report = std::move(ex.report);
    const json& d = j.at("diagnostics");
    eq.diagnostics.iterations = d.at("iterations").get<std::size_t>();
    eq.diagnostics.converged = d.at("converged").get<bool>();
    eq.diagnostics.phi_norm_gaps = d.at("phi_norm_gaps").get<std::vector<double>>();
    eq.diagnostics.value_changes = d.at("value_changes").get<std::vector<double>>();
    eq.diagnostics.empirical_rate = d.at("empirical_rate").get<double>();
    eq.diagnostics.theta_bound = d.at("theta_bound").get<double>();
    eq.diagnostics.slack = d.at("slack").get<double>();
    eq.diagnostics.burn_in = d.at("burn_in").get<std::size_t>();
    if (!d.at("uniqueness_gap").is_null()) eq.diagnostics.uniqueness_gap = d.at("uniqueness_gap").get<double>();
    if (cfg_out) *cfg_out = cfg;
    return eq;
}

json noncontraction_json(const NonContractionReport& r) {
    return {{"norm_v_diff", round12(r.norm_v_diff)},
            {"norm_Sv_diff", round12(r.norm_Sv_diff)},
            {"witness_state", {{"z", round12(r.witness_z)}, {"b", round12(r.witness_b)}, {"k", round12(r.witness_k)}}},
            {"Sv1", round12(r.Sv1)},
            {"Sv2", round12(r.Sv2)},
            {"k_next_part1", round12(r.k_next_part1)},
            {"positivity_margin", round12(r.positivity_margin)},
            {"verdict", r.verdict}};
}

json panel_stats_json(const PanelStats& s) {
    auto m = [](const Moments& x) { return json{{"n", x.n}, {"mean", round12(x.mean)}, {"sd", round12(x.sd)}}; };
    json by = json::array();
    for (const auto& b : s.by_state) {
        by.push_back({{"z_index", b.z_index},
                      {"n", b.n},
                      {"leverage", round12(b.leverage)},
                      {"investment_rate", round12(b.investment_rate)},
                      {"dividend_yield", round12(b.dividend_yield)}});
    }
    return {{"paths", s.paths},
            {"records", s.records},
            {"defaults", s.defaults},
            {"default_frequency", round12(s.default_frequency)},
            {"default_hazard", round12(s.default_hazard)},
            {"leverage", m(s.leverage)},
            {"investment_rate", m(s.investment_rate)},
            {"dividend_yield", m(s.dividend_yield)},
            {"by_state", by}};
}

json manifest_json(const RunConfig& cfg, const Economy& econ, const std::string& command,
                   const std::vector<std::string>& files) {
    return {{"tool", "dualdebt"},
            {"version", DUALDEBT_VERSION},
            {"command", command},
            {"model", to_string(cfg.model)},
            {"config_hash", config_hash(cfg)},
            {"grid_sizes", {{"z", econ.nz()}, {"b", econ.nb()}, {"k", econ.nk()}, {"v", econ.nv()}}},
            {"files", files}};
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

}  // namespace dualdebt
