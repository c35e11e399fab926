#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "roa/budget.hpp"
#include "roa/hoif.hpp"

namespace roa {

struct InventoryConfig {
    double s = 20.0;
    double S = 45.0;
    std::string generator = "perfect"; // perfect | corrupt | zero
    long n = 50;                       // demand observations on hand
    long periods = 30;
    long warmup = 1000;
};

struct MlConfig {
    std::string kind = "linear"; // linear | polynomial | complex
    std::string noise = "low";   // low | high
    long n = 100;
    std::string learner = "ols"; // ols | constant
    long folds = 10;
    long repeats = 10;
};

struct OracleConfig {
    int k = 4;
    int power = 2;
    long n = 20;
    double mu = 1.0;
    double sigma = 1.0;
};

struct ExperimentConfig {
    std::string scenario = "oracle"; // oracle | inventory | ml
    long budget = 1000;
    double alpha = 0.05;
    std::uint64_t root_seed = 20240501;
    long macro_replications = 100;
    std::string mode = "eq21"; // eq21 | eq22
    bool gate_bias = false;
    int threads = 0;
    std::vector<std::string> methods; // empty = scenario defaults
    AllocationOverrides alloc;
    InventoryConfig inventory;
    MlConfig ml;
    OracleConfig oracle;
    std::string out_dir = ".";

    BetaMode beta_mode() const;
    void validate() const;
};

/// Parses and validates a JSON config; unknown keys and constraint
/// violations are rejected with path-qualified messages. An empty file is
/// the all-defaults config. ROA_SEED in the environment overrides root_seed.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& json_text);

std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a over the canonical serialized form.
std::uint64_t config_hash(const ExperimentConfig& config);

} // namespace roa
