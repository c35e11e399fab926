#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "roa/config.hpp"
#include "roa/engine.hpp"
#include "roa/report.hpp"

namespace roa {

struct CoverageResult {
    std::string method;
    long replications = 0;
    long covered = 0;
    double coverage = 0.0;
    double mean_halfwidth = 0.0;
};

struct CoverageLogRow {
    std::string method;
    long rep = 0;
    double lo = 0.0;
    double point = 0.0;
    double hi = 0.0;
    double truth = 0.0;
    bool covered = false;
};

struct CoverageOutcome {
    double truth = 0.0;
    std::vector<CoverageResult> summary;
    std::vector<CoverageLogRow> log; // full per-replication log
};

/// Runs macro-replications of the configured scenario: per replication a
/// fresh dataset, per method a fresh analysis and interval, coverage judged
/// against the scenario's truth oracle. Replications run in parallel on
/// derived seeds; the log is ordered by (method, rep) regardless of the
/// schedule.
CoverageOutcome coverage_experiment(const ExperimentConfig& config);

/// Truth oracles used by coverage_experiment, exposed for tests.
double scenario_truth(const ExperimentConfig& config);

std::vector<std::string> default_methods(const std::string& scenario);

void write_coverage_csv(const CoverageOutcome& outcome, const Provenance& provenance,
                        const std::filesystem::path& path);
void write_coverage_summary_csv(const CoverageOutcome& outcome, const Provenance& provenance,
                                const std::filesystem::path& path);

} // namespace roa
