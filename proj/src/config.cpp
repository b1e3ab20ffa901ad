#include "dualdebt/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>

namespace dualdebt {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "$" : path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void read_number(const json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(join(path, key), "must be finite");
}

void read_count(const json& obj, const std::string& path, const char* key, std::size_t& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(join(path, key), "expected a non-negative integer");
    out = static_cast<std::size_t>(v.get<long long>());
}

std::string path_for_param(const ParamError& e) {
    const std::string& f = e.field();
    static const std::set<std::string> grid_fields{"k_size", "b_size", "v_size", "k_max", "k_growth", "v_max"};
    if (grid_fields.count(f)) return "grids." + f;
    if (f.rfind("states", 0) == 0 || f.rfind("transition", 0) == 0) return "shocks." + f;
    if (f == "psi") return "adjustment.psi";
    return "params." + f;
}

void parse_liquidation(const json& j, ModelParams& p) {
    const std::string path = "params.liquidation";
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError(path + ".kind", "expected \"proportional\" or \"sqrt\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "proportional") {
        reject_unknown(j, path, {"kind", "lambda"});
        Proportional prop;
        read_number(j, path, "lambda", prop.lambda);
        p.liquidation = prop;
    } else if (kind == "sqrt") {
        reject_unknown(j, path, {"kind", "nu"});
        SqrtForm sq;
        read_number(j, path, "nu", sq.nu);
        p.liquidation = sq;
    } else {
        throw ConfigError(path + ".kind", "expected \"proportional\" or \"sqrt\"");
    }
}

}  // namespace

ModelKind parse_model_kind(const std::string& s) {
    if (s == "base") return ModelKind::Base;
    if (s == "exogenous") return ModelKind::Exogenous;
    if (s == "adjustment") return ModelKind::Adjustment;
    throw ConfigError("model", "expected one of base, exogenous, adjustment");
}

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    reject_unknown(j, "", {"model", "params", "shocks", "grids", "solver", "adjustment", "output_dir"});
    if (j.contains("model")) {
        if (!j.at("model").is_string()) throw ConfigError("model", "expected a string");
        cfg.model = parse_model_kind(j.at("model").get<std::string>());
    }
    if (j.contains("params")) {
        const json& p = j.at("params");
        if (cfg.model == ModelKind::Exogenous) {
            reject_unknown(p, "params", {"tau", "beta", "rho", "b_lo", "b_hi"});
            read_number(p, "params", "tau", cfg.exogenous.tau);
            read_number(p, "params", "beta", cfg.exogenous.beta);
            read_number(p, "params", "rho", cfg.exogenous.rho);
            read_number(p, "params", "b_lo", cfg.exogenous.b_lo);
            read_number(p, "params", "b_hi", cfg.exogenous.b_hi);
        } else {
            reject_unknown(p, "params", {"A", "alpha", "tau", "delta", "beta", "rho", "b_lo", "b_hi", "liquidation"});
            read_number(p, "params", "A", cfg.params.A);
            read_number(p, "params", "alpha", cfg.params.alpha);
            read_number(p, "params", "tau", cfg.params.tau);
            read_number(p, "params", "delta", cfg.params.delta);
            read_number(p, "params", "beta", cfg.params.beta);
            read_number(p, "params", "rho", cfg.params.rho);
            read_number(p, "params", "b_lo", cfg.params.b_lo);
            read_number(p, "params", "b_hi", cfg.params.b_hi);
            if (p.contains("liquidation")) parse_liquidation(p.at("liquidation"), cfg.params);
        }
    }
    if (j.contains("shocks")) {
        const json& s = j.at("shocks");
        reject_unknown(s, "shocks", {"states", "transition"});
        if (s.contains("states")) {
            const json& st = s.at("states");
            if (!st.is_array()) throw ConfigError("shocks.states", "expected an array of numbers");
            cfg.states.clear();
            for (std::size_t i = 0; i < st.size(); ++i) {
                if (!st[i].is_number()) throw ConfigError("shocks.states[" + std::to_string(i) + "]", "expected a number");
                cfg.states.push_back(st[i].get<double>());
            }
        }
        if (s.contains("transition")) {
            const json& tr = s.at("transition");
            if (!tr.is_array()) throw ConfigError("shocks.transition", "expected an array of rows");
            cfg.transition.clear();
            for (std::size_t i = 0; i < tr.size(); ++i) {
                const std::string rp = "shocks.transition[" + std::to_string(i) + "]";
                if (!tr[i].is_array()) throw ConfigError(rp, "expected an array of numbers");
                std::vector<double> row;
                for (std::size_t c = 0; c < tr[i].size(); ++c) {
                    if (!tr[i][c].is_number()) throw ConfigError(rp + "[" + std::to_string(c) + "]", "expected a number");
                    row.push_back(tr[i][c].get<double>());
                }
                cfg.transition.push_back(std::move(row));
            }
        }
    }
    if (j.contains("grids")) {
        const json& g = j.at("grids");
        reject_unknown(g, "grids", {"k_size", "b_size", "v_size", "k_max", "k_spacing", "k_growth", "v_max"});
        read_count(g, "grids", "k_size", cfg.grids.k);
        read_count(g, "grids", "b_size", cfg.grids.b);
        read_count(g, "grids", "v_size", cfg.grids.v);
        read_number(g, "grids", "k_max", cfg.grids.k_max);
        read_number(g, "grids", "k_growth", cfg.grids.k_growth);
        if (g.contains("k_spacing")) {
            const json& sp = g.at("k_spacing");
            const std::string s = sp.is_string() ? sp.get<std::string>() : "";
            if (s == "uniform") cfg.grids.k_spacing = Spacing::Uniform;
            else if (s == "geometric") cfg.grids.k_spacing = Spacing::Geometric;
            else throw ConfigError("grids.k_spacing", "expected \"uniform\" or \"geometric\"");
        }
        if (g.contains("v_max") && !g.at("v_max").is_null()) {
            double v = 0.0;
            read_number(g, "grids", "v_max", v);
            cfg.grids.v_max = v;
        }
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown(s, "solver", {"epsilon", "tol", "max_iter", "slack", "burn_in", "uniqueness_check"});
        if (s.contains("epsilon") && !s.at("epsilon").is_null()) {
            double e = 0.0;
            read_number(s, "solver", "epsilon", e);
            cfg.solver.epsilon = e;
        }
        read_number(s, "solver", "tol", cfg.solver.tol);
        read_count(s, "solver", "max_iter", cfg.solver.max_iter);
        read_number(s, "solver", "slack", cfg.solver.slack);
        read_count(s, "solver", "burn_in", cfg.solver.burn_in);
        if (s.contains("uniqueness_check")) {
            if (!s.at("uniqueness_check").is_boolean()) throw ConfigError("solver.uniqueness_check", "expected a boolean");
            cfg.solver.uniqueness_check = s.at("uniqueness_check").get<bool>();
        }
    }
    if (j.contains("adjustment")) {
        const json& a = j.at("adjustment");
        reject_unknown(a, "adjustment", {"psi"});
        read_number(a, "adjustment", "psi", cfg.adjustment.psi);
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    try {
        const Economy econ = make_economy(cfg);
        contraction_constants(cfg.solver.epsilon ? *cfg.solver.epsilon
                                                 : default_epsilon(econ.params.tau, econ.params.rho),
                              econ);
    } catch (const ParamError& e) {
        const std::string what = e.what(), prefix = e.field() + ": ";
        throw ConfigError(path_for_param(e), what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what);
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        const std::string what = e.what();
        if (what.find("epsilon") != std::string::npos) throw ConfigError("solver.epsilon", what);
        throw ConfigError("params", what);
    }
    if (!(cfg.solver.tol > 0.0)) throw ConfigError("solver.tol", "must be > 0");
    if (cfg.solver.max_iter < 1) throw ConfigError("solver.max_iter", "must be >= 1");
    if (!(cfg.solver.slack >= 0.0)) throw ConfigError("solver.slack", "must be >= 0");
}

RunConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("$", "cannot read config file " + file);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["model"] = to_string(cfg.model);
    if (cfg.model == ModelKind::Exogenous) {
        const auto& p = cfg.exogenous;
        j["params"] = {{"tau", p.tau}, {"beta", p.beta}, {"rho", p.rho}, {"b_lo", p.b_lo}, {"b_hi", p.b_hi}};
    } else {
        const auto& p = cfg.params;
        json liq;
        if (const auto* prop = std::get_if<Proportional>(&p.liquidation)) {
            liq = {{"kind", "proportional"}, {"lambda", prop->lambda}};
        } else {
            liq = {{"kind", "sqrt"}, {"nu", std::get<SqrtForm>(p.liquidation).nu}};
        }
        j["params"] = {{"A", p.A},       {"alpha", p.alpha}, {"tau", p.tau},   {"delta", p.delta},      {"beta", p.beta},
                       {"rho", p.rho},   {"b_lo", p.b_lo},   {"b_hi", p.b_hi}, {"liquidation", liq}};
    }
    j["shocks"] = {{"states", cfg.states}, {"transition", cfg.transition}};
    j["grids"] = {{"k_size", cfg.grids.k},
                  {"b_size", cfg.grids.b},
                  {"v_size", cfg.grids.v},
                  {"k_max", cfg.grids.k_max},
                  {"k_spacing", cfg.grids.k_spacing == Spacing::Uniform ? "uniform" : "geometric"},
                  {"k_growth", cfg.grids.k_growth},
                  {"v_max", cfg.grids.v_max ? json(*cfg.grids.v_max) : json(nullptr)}};
    j["solver"] = {{"epsilon", cfg.solver.epsilon ? json(*cfg.solver.epsilon) : json(nullptr)},
                   {"tol", cfg.solver.tol},
                   {"max_iter", cfg.solver.max_iter},
                   {"slack", cfg.solver.slack},
                   {"burn_in", cfg.solver.burn_in},
                   {"uniqueness_check", cfg.solver.uniqueness_check}};
    if (cfg.model == ModelKind::Adjustment) j["adjustment"] = {{"psi", cfg.adjustment.psi}};
    j["output_dir"] = cfg.output_dir;
    return j;
}

std::string config_hash(const RunConfig& cfg) {
    json j = config_to_json(cfg);
    j.erase("output_dir");
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ShockChain make_chain(const RunConfig& cfg) { return build_shock_chain(cfg.states, cfg.transition); }

Grids make_grids(const RunConfig& cfg, const ShockChain& chain) {
    if (cfg.model == ModelKind::Exogenous) {
        return build_exogenous_grids(cfg.exogenous, chain, cfg.grids.b, cfg.grids.v, cfg.grids.v_max);
    }
    cfg.params.validate();
    return build_grids(cfg.params, chain, cfg.grids);
}

Economy make_economy(const RunConfig& cfg) {
    const ShockChain chain = make_chain(cfg);
    const Grids grids = make_grids(cfg, chain);
    switch (cfg.model) {
        case ModelKind::Exogenous: return make_economy(cfg.exogenous, chain, grids);
        case ModelKind::Adjustment: return make_economy(cfg.params, cfg.adjustment, chain, grids);
        case ModelKind::Base: break;
    }
    return make_economy(cfg.params, chain, grids);
}

}  // namespace dualdebt
