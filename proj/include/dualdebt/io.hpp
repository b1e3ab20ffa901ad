#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dualdebt/config.hpp"
#include "dualdebt/dual.hpp"
#include "dualdebt/primal.hpp"
#include "dualdebt/sim.hpp"

namespace dualdebt {

// 12 significant digits.
std::string fmt(double x);
// x rounded to 12 significant digits, for JSON output.
double round12(double x);

std::string value_csv(const ValueTable& V, const Economy& econ);
std::string prices_csv(const PriceTable& q, const Economy& econ);
std::string bonds_csv(const BondTable& B, const Economy& econ);
std::string policy_csv(const Policy& pol, const Economy& econ);
std::string targets_csv(const Targets& t, const Economy& econ);
std::string panel_csv(const Panel& panel);

nlohmann::json diagnostics_json(const ConvergenceDiagnostics& d);
nlohmann::json equilibrium_json(const Equilibrium& eq, const RunConfig& cfg);
nlohmann::json noncontraction_json(const NonContractionReport& r);
nlohmann::json panel_stats_json(const PanelStats& s);

// Rebuilds an equilibrium from equilibrium_json output: V and B are read back, prices and policy recomputed.
Equilibrium equilibrium_from_json(const nlohmann::json& j, RunConfig* cfg_out = nullptr);

nlohmann::json manifest_json(const RunConfig& cfg, const Economy& econ, const std::string& command,
                             const std::vector<std::string>& files);

void write_file(const std::filesystem::path& path, const std::string& body);

}  // namespace dualdebt
