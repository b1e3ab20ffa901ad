#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dualdebt/dual.hpp"

namespace dualdebt {

inline constexpr const char* kGeneratorId = "mt19937_64+splitmix64";

// Seed of the per-path generator: splitmix64(splitmix64(seed) + path).
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path);

struct PanelRecord {
    std::uint32_t path = 0;
    std::uint32_t t = 0;
    std::uint32_t z_index = 0;
    double z = 0.0;
    double b = 0.0;
    double k = 0.0;
    double b_next = 0.0;
    double k_next = 0.0;
    double dividend = 0.0;
    double investment = 0.0;
    double q_paid = 0.0;
    double equity = 0.0;  // V at the snapped state
    bool defaulted = false;
};

struct Panel {
    std::vector<PanelRecord> records;  // grouped by path, then time
    std::uint64_t seed = 0;
    std::size_t n_paths = 0;
    std::size_t horizon = 0;
    std::string generator = kGeneratorId;
};

struct StartState {
    std::size_t z_index = 0;
    double b = 0.0;
    double k = 0.0;
};

// At the targets (k*, b*) of shock 0 for the base model; otherwise b = 0 at the middle capital node.
StartState default_start(const Equilibrium& eq);

Panel simulate_paths(const Equilibrium& eq, std::size_t n_paths, std::size_t horizon, std::uint64_t seed,
                     const StartState& start);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation; 0 when n < 2
};

struct StateMeans {
    std::size_t z_index = 0;
    std::size_t n = 0;
    double leverage = 0.0;
    double investment_rate = 0.0;
    double dividend_yield = 0.0;
};

struct PanelStats {
    std::size_t paths = 0;
    std::size_t records = 0;
    std::size_t defaults = 0;
    double default_frequency = 0.0;  // defaulted paths / paths
    double default_hazard = 0.0;     // default records / records
    Moments leverage;                // q b' / (q b' + k)
    Moments investment_rate;         // i / k, k > 0
    Moments dividend_yield;          // d / V
    std::vector<StateMeans> by_state;
};

PanelStats panel_stats(const Panel& panel);

}  // namespace dualdebt
