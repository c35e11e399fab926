#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "roa/budget.hpp"
#include "roa/ci.hpp"
#include "roa/fib.hpp"
#include "roa/hoif.hpp"
#include "roa/model.hpp"
#include "roa/tensor.hpp"
#include "roa/variance.hpp"

namespace roa {

/// Knobs of the nested run. Inner resample sizes default to m* at both
/// levels, matching the F* -> F** -> F*** chain of the methodology; callers
/// that need a different ladder (the ML harness exposes one) override them.
struct EngineOptions {
    long inner_m2 = 0; // 0 => m*
    long inner_m3 = 0; // 0 => inner_m2
    int threads = 0;   // 0 => hardware concurrency
    bool run_inner_levels = true; // false for B2 = 0 baseline methods
    bool run_cv_extra = true;
    bool run_baseline = true;
    // Minimum distinct support of inner resamples; degenerate draws are
    // redrawn on fresh derived seeds (at most 16 attempts). Models whose
    // output is undefined on near-degenerate inputs (the OOB error needs a
    // point to hold out) set this to 2.
    long min_inner_support = 1;
};

/// Raw tensor of one nested run plus run accounting.
struct NestedRun {
    OutputTensor tensor;
    BudgetAllocation alloc;
    std::uint64_t root_seed = 0;
    long model_runs = 0; // counted at runtime, cross-checked against the ledger
};

/// Fills the tensor: per b1 an m*-out-of-n resample, R replications with
/// common random numbers across the three bootstrap levels, one
/// control-variate extra run per b1, and R baseline replications at the
/// un-resampled empirical distribution. (b1) items run in parallel; every
/// stream is derived from (root_seed, path), so any schedule yields
/// bit-identical results.
NestedRun run_nested(const Model& model, const Dataset& base, const BudgetAllocation& alloc,
                     const ModelConfig& config, std::uint64_t root_seed,
                     const EngineOptions& options = {});

/// Full analysis of one run: FIB cells, control variates, HOIF bias,
/// variance decomposition, and the CI variants.
struct AnalysisResult {
    NestedRun run;
    std::vector<FibResult> fib; // row-major (b1, r)
    std::vector<double> yd;     // FIB-debiased outputs
    std::vector<double> yd_vr;  // variance-reduced debiased outputs
    double w_mean = 0.0;
    double w_cv_mean = 0.0;
    double baseline_mean = 0.0;
    HoifDiagnostics hoif;
    VarianceReport variance;    // with plain W
    VarianceReport variance_vr; // with variance-reduced W
    ConfidenceInterval crude;
    ConfidenceInterval barton;
    ConfidenceInterval lamqian;
    ConfidenceInterval bias_corrected;
    ConfidenceInterval bias_corrected_vr;

    double plug_in_mean = 0.0; // grand mean of star outputs
};

struct AnalysisOptions {
    double alpha = 0.05;
    BetaMode beta_mode = BetaMode::eq21;
    bool gate_bias = false; // zero insignificant W_r at alpha before use
    EngineOptions engine;
};

AnalysisResult analyze_nested(const Model& model, const Dataset& base,
                              const BudgetAllocation& alloc, const ModelConfig& config,
                              std::uint64_t root_seed, const AnalysisOptions& options = {});

/// Analysis of an already-built run (used by the ML harness).
AnalysisResult analyze_run(NestedRun run, const AnalysisOptions& options);

} // namespace roa
