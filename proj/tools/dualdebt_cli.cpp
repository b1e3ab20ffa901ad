// dualdebt: solve, inspect and verify the defaultable-debt firm model.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dualdebt/config.hpp"
#include "dualdebt/io.hpp"
#include "dualdebt/parallel.hpp"
#include "dualdebt/primal.hpp"
#include "dualdebt/sim.hpp"
#include "dualdebt/verify.hpp"

namespace fs = std::filesystem;
using namespace dualdebt;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNoConvergence = 3;
constexpr int kVerifyFailed = 4;

constexpr const char* kOutputEnv = "DUALDEBT_OUTPUT_DIR";

struct Globals {
    std::string config;
    int jobs = 0;
    std::string out;
};

struct SolveFlags {
    std::string model;
    std::optional<double> psi, tol, epsilon;
    std::optional<std::size_t> max_iter;
};

RunConfig load(const Globals& g, const SolveFlags& f) {
    RunConfig cfg = g.config.empty() ? parse_config(nlohmann::json::object()) : load_config(g.config);
    if (!f.model.empty()) cfg.model = parse_model_kind(f.model);
    if (f.psi) cfg.adjustment.psi = *f.psi;
    if (f.tol) cfg.solver.tol = *f.tol;
    if (f.epsilon) cfg.solver.epsilon = *f.epsilon;
    if (f.max_iter) cfg.solver.max_iter = *f.max_iter;
    if (const char* env = std::getenv(kOutputEnv); env && *env) cfg.output_dir = env;
    if (!g.out.empty()) cfg.output_dir = g.out;
    validate_config(cfg);
    return cfg;
}

// Solves from the config, or reloads a solved artifact when from is set.
Equilibrium obtain(const Globals& g, const SolveFlags& f, const std::string& from, RunConfig& cfg) {
    if (from.empty()) {
        cfg = load(g, f);
        return solve_equilibrium(make_economy(cfg), cfg.solver);
    }
    std::ifstream in(from);
    if (!in) throw ConfigError("--from", "cannot read " + from);
    const nlohmann::json j = nlohmann::json::parse(in);
    Equilibrium eq = equilibrium_from_json(j, &cfg);
    if (const char* env = std::getenv(kOutputEnv); env && *env) cfg.output_dir = env;
    if (!g.out.empty()) cfg.output_dir = g.out;
    return eq;
}

void emit(const RunConfig& cfg, const Economy& econ, const std::string& command,
          const std::vector<std::pair<std::string, std::string>>& files) {
    const fs::path dir(cfg.output_dir);
    std::vector<std::string> names;
    for (const auto& [name, body] : files) {
        write_file(dir / name, body);
        names.push_back(name);
    }
    write_file(dir / ("manifest-" + command + ".json"), manifest_json(cfg, econ, command, names).dump(2) + "\n");
    for (const auto& n : names) std::cout << "wrote " << (dir / n).string() << "\n";
}

int run_solve(const Globals& g, const SolveFlags& f) {
    RunConfig cfg;
    const Equilibrium eq = obtain(g, f, "", cfg);
    const auto& d = eq.diagnostics;
    std::printf("model            %s\n", to_string(eq.econ.kind));
    std::printf("grids            z=%zu b=%zu k=%zu v=%zu\n", eq.econ.nz(), eq.econ.nb(), eq.econ.nk(), eq.econ.nv());
    std::printf("iterations       %zu\n", d.iterations);
    std::printf("theta            %s\n", fmt(d.theta_bound).c_str());
    std::printf("empirical rate   %s\n", fmt(d.empirical_rate).c_str());
    if (d.uniqueness_gap) std::printf("uniqueness gap   %s\n", fmt(*d.uniqueness_gap).c_str());
    std::printf("default states   %zu\n", eq.report.default_states);
    emit(cfg, eq.econ, "solve",
         {{"equilibrium.json", equilibrium_json(eq, cfg).dump() + "\n"},
          {"diagnostics.json", diagnostics_json(d).dump(2) + "\n"},
          {"value.csv", value_csv(eq.V, eq.econ)},
          {"prices.csv", prices_csv(eq.q, eq.econ)},
          {"bonds.csv", bonds_csv(eq.B, eq.econ)},
          {"policy.csv", policy_csv(eq.policy, eq.econ)}});
    return kOk;
}

int run_demo(bool as_json) {
    const NonContractionReport r = noncontraction_demo(NonContractionInputs{});
    if (as_json) {
        std::cout << noncontraction_json(r).dump(2) << "\n";
    } else {
        std::printf("%-22s %s\n", "||v2 - v1||", fmt(r.norm_v_diff).c_str());
        std::printf("%-22s %s\n", "||Sv2 - Sv1||", fmt(r.norm_Sv_diff).c_str());
        std::printf("%-22s (z=%s, b=%s, k=%s)\n", "witness state", fmt(r.witness_z).c_str(), fmt(r.witness_b).c_str(),
                    fmt(r.witness_k).c_str());
        std::printf("%-22s %s\n", "Sv1", fmt(r.Sv1).c_str());
        std::printf("%-22s %s\n", "Sv2", fmt(r.Sv2).c_str());
        std::printf("%-22s %s\n", "k' (first form)", fmt(r.k_next_part1).c_str());
        std::printf("%-22s %s\n", "verdict", r.verdict ? "true" : "false");
    }
    return r.verdict ? kOk : kVerifyFailed;
}

int run_targets(const Globals& g, const SolveFlags& f, const std::string& from) {
    RunConfig cfg;
    const Equilibrium eq = obtain(g, f, from, cfg);
    if (eq.econ.kind == ModelKind::Exogenous) throw ConfigError("model", "targets need a capital choice");
    const Targets t = compute_targets(eq.q, eq.econ);
    for (std::size_t z = 0; z < eq.econ.nz(); ++z)
        std::printf("z=%-10s k*=%-14s b*=%-14s k*_autarky=%s\n", fmt(eq.econ.chain.states[z]).c_str(),
                    fmt(t.k_star[z]).c_str(), fmt(t.b_star[z]).c_str(), fmt(t.k_star_autarky[z]).c_str());
    emit(cfg, eq.econ, "targets", {{"targets.csv", targets_csv(t, eq.econ)}});
    return kOk;
}

int run_policy(const Globals& g, const SolveFlags& f, const std::string& from) {
    RunConfig cfg;
    const Equilibrium eq = obtain(g, f, from, cfg);
    const PolicyReport& r = eq.report;
    std::printf("high capital     %zu\nmoderate capital %zu\nlow capital      %zu\ndefault          %zu\n",
                r.high_capital_states, r.moderate_states, r.low_capital_states, r.default_states);
    emit(cfg, eq.econ, "policy", {{"policy.csv", policy_csv(eq.policy, eq.econ)}});
    return kOk;
}

int run_simulate(const Globals& g, const SolveFlags& f, const std::string& from, std::size_t paths,
                 std::size_t horizon, std::uint64_t seed) {
    RunConfig cfg;
    const Equilibrium eq = obtain(g, f, from, cfg);
    const Panel panel = simulate_paths(eq, paths, horizon, seed, default_start(eq));
    const PanelStats s = panel_stats(panel);
    std::printf("records          %zu\ndefault freq     %s\nmean leverage    %s\n", s.records,
                fmt(s.default_frequency).c_str(), fmt(s.leverage.mean).c_str());
    emit(cfg, eq.econ, "simulate",
         {{"panel.csv", panel_csv(panel)}, {"panel_stats.json", panel_stats_json(s).dump(2) + "\n"}});
    return kOk;
}

int run_verify(const Globals& g, const SolveFlags& f, const std::string& from) {
    RunConfig cfg;
    const Equilibrium eq = obtain(g, f, from, cfg);
    bool ok = true;
    for (const CheckResult& c : verify_equilibrium(eq, cfg.solver.tol)) {
        const char* tag = !c.applicable ? "SKIP" : (c.pass ? "PASS" : "FAIL");
        std::printf("%s  %-20s checked=%-8zu violations=%-6zu worst=%-14s tol=%s %s\n", tag, c.name.c_str(), c.checked,
                    c.violations, fmt(c.worst).c_str(), fmt(c.tolerance).c_str(), c.detail.c_str());
        ok = ok && c.pass;
    }
    return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver for a firm with defaultable one-period debt"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--jobs", g.jobs, "worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
    app.add_option("--out", g.out, std::string("output directory (also ") + kOutputEnv + ")");

    SolveFlags f;
    auto solver_flags = [&f](CLI::App* sub) {
        sub->add_option("--model", f.model, "base | exogenous | adjustment");
        sub->add_option("--psi", f.psi, "adjustment cost scale");
        sub->add_option("--tol", f.tol, "stopping tolerance");
        sub->add_option("--max-iter", f.max_iter, "iteration cap");
        sub->add_option("--epsilon", f.epsilon, "weight parameter of the phi-norm");
    };
    std::string from;

    auto* solve = app.add_subcommand("solve", "solve the equilibrium and write its tables");
    solver_flags(solve);

    bool as_json = false;
    auto* demo = app.add_subcommand("demo-noncontraction", "closed-form witness that the primal operator is not a contraction");
    demo->add_flag("--json", as_json, "print JSON instead of text");

    auto* targets = app.add_subcommand("targets", "capital and debt targets per shock");
    auto* policy = app.add_subcommand("policy", "per-state policy with case labels");
    auto* verify = app.add_subcommand("verify", "property checks on a solved equilibrium");
    std::size_t paths = 1000, horizon = 200;
    std::uint64_t seed = 12345;
    auto* simulate = app.add_subcommand("simulate", "simulate a panel of firms");
    simulate->add_option("--paths", paths, "number of paths")->check(CLI::PositiveNumber);
    simulate->add_option("--horizon", horizon, "periods per path")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "master seed");
    for (auto* sub : {targets, policy, verify, simulate}) {
        solver_flags(sub);
        sub->add_option("--from", from, "equilibrium.json written by solve")->check(CLI::ExistingFile);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        set_jobs(static_cast<unsigned>(g.jobs));
        if (*solve) return run_solve(g, f);
        if (*demo) return run_demo(as_json);
        if (*targets) return run_targets(g, f, from);
        if (*policy) return run_policy(g, f, from);
        if (*simulate) return run_simulate(g, f, from, paths, horizon, seed);
        if (*verify) return run_verify(g, f, from);
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kInvalid;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid json: " << e.what() << "\n";
        return kInvalid;
    } catch (const ConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const PreconditionError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerifyFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}
