#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dualdebt/dual.hpp"
#include "dualdebt/economy.hpp"
#include "dualdebt/model.hpp"

namespace dualdebt {

// Validation failure; path is the JSON path of the offending field, e.g. "params.alpha".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct RunConfig {
    ModelKind model = ModelKind::Base;
    ModelParams params;
    ExogenousModelParams exogenous;
    AdjustmentCostSpec adjustment;
    std::vector<double> states{0.9, 1.1};
    std::vector<std::vector<double>> transition{{0.8, 0.2}, {0.2, 0.8}};
    GridSizes grids;
    SolverOptions solver;
    std::string output_dir = "out";
};

// Parses and validates; every field is optional and defaults to the desk instance.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& file);

// Re-checks a config after command-line overrides.
void validate_config(const RunConfig& cfg);

nlohmann::json config_to_json(const RunConfig& cfg);

// FNV-1a 64-bit hash of the canonical config dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

ShockChain make_chain(const RunConfig& cfg);
Grids make_grids(const RunConfig& cfg, const ShockChain& chain);
Economy make_economy(const RunConfig& cfg);

ModelKind parse_model_kind(const std::string& s);

}  // namespace dualdebt
