#pragma once

#include <filesystem>
#include <string>

#include "roa/config.hpp"
#include "roa/engine.hpp"

namespace roa {

/// Provenance stamped into every output file: config hash, root seed,
/// allocation ledger and mode flags.
struct Provenance {
    std::uint64_t config_hash = 0;
    std::uint64_t root_seed = 0;
    std::string mode;
    bool gate_bias = false;
    std::string version = "roa-0.1.0";
};

Provenance make_provenance(const ExperimentConfig& config);

/// Serializes the full analysis (point estimates, variance components, all
/// five variance groups, HOIF diagnostics, the CI set, ledger with runtime
/// run counter) as JSON.
std::string report_json(const AnalysisResult& result, const Provenance& provenance);

void write_report_json(const AnalysisResult& result, const Provenance& provenance,
                       const std::filesystem::path& path);

/// One row per (b1, r): star output, FIB quantities, t-test and debiased
/// values. Byte-identical for equal (config, seed).
void write_cells_csv(const AnalysisResult& result, const Provenance& provenance,
                     const std::filesystem::path& path);

/// Formats a double with round-trip precision (%.17g).
std::string format_double(double v);

} // namespace roa
