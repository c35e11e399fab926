#include "roa/coverage.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "roa/inventory.hpp"
#include "roa/ml.hpp"
#include "roa/parallel.hpp"
#include "roa/stats.hpp"

namespace roa {

namespace {

enum : std::uint64_t {
    kPathDataset = 11,
    kPathAnalysis = 12,
    kPathCrude = 13,
    kPathBaselineMethod = 14,
    kPathTruth = 15,
};

DemandKind demand_kind(const std::string& s) {
    if (s == "perfect") return DemandKind::perfect_poisson;
    if (s == "corrupt") return DemandKind::corrupt_poisson;
    return DemandKind::zero;
}

struct ScenarioContext {
    std::shared_ptr<Model> model; // oracle/inventory functional (per-rep for ml)
    std::shared_ptr<Learner> learner;
};

Dataset scenario_dataset(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.scenario == "inventory") {
        return demand_kind(cfg.inventory.generator) == DemandKind::corrupt_poisson
                   ? gen_corrupt_poisson(cfg.inventory.n, seed)
                   : gen_perfect_poisson(cfg.inventory.n, seed);
    }
    if (cfg.scenario == "oracle") {
        Rng rng(seed);
        std::vector<double> v(static_cast<std::size_t>(cfg.oracle.n));
        for (auto& x : v) x = cfg.oracle.mu + cfg.oracle.sigma * rng.next_normal();
        return Dataset::from_values(std::move(v), "oracle");
    }
    // ml datasets are SupervisedDatasets; flattened for the engine
    return generate_dataset(parse_ml_kind(cfg.ml.kind),
                            cfg.ml.noise == "low" ? MlNoise::low : MlNoise::high, cfg.ml.n, seed)
        .to_dataset();
}

std::shared_ptr<Learner> scenario_learner(const ExperimentConfig& cfg) {
    return cfg.ml.learner == "constant" ? make_constant_learner() : make_ols_learner();
}

// Model used to evaluate one dataset; for ml the model wraps the dataset
// itself, so it is rebuilt per replication.
std::shared_ptr<Model> scenario_model(const ExperimentConfig& cfg, const Dataset& data) {
    if (cfg.scenario == "inventory") {
        InventoryPolicy policy{cfg.inventory.s, cfg.inventory.S};
        return make_inventory_model(policy, calibrated_costs(), cfg.inventory.periods,
                                    cfg.inventory.warmup);
    }
    if (cfg.scenario == "oracle")
        return make_mean_model(cfg.oracle.k, cfg.oracle.power);
    return make_oob_error_model(SupervisedDataset::from_dataset(data), scenario_learner(cfg),
                                ml_test_fraction(cfg.budget, static_cast<long>(data.size())),
                                static_cast<long>(data.size()));
}

} // namespace

std::vector<std::string> default_methods(const std::string& scenario) {
    if (scenario == "ml")
        return {"bias-corrected-vr", "bias-corrected", "iu-barton", "iu-lamqian", "loo-boot",
                "repeated-cv"};
    return {"crude", "iu-barton", "iu-lamqian", "bias-corrected", "bias-corrected-vr"};
}

double scenario_truth(const ExperimentConfig& cfg) {
    const std::uint64_t seed = derive_seed(cfg.root_seed, {kPathTruth});
    if (cfg.scenario == "inventory") {
        InventoryPolicy policy{cfg.inventory.s, cfg.inventory.S};
        return long_run_reference(policy, calibrated_costs(), demand_kind(cfg.inventory.generator),
                                  seed);
    }
    if (cfg.scenario == "oracle")
        return mean_model_theta(cfg.oracle.mu, cfg.oracle.sigma * cfg.oracle.sigma, cfg.oracle.k,
                                cfg.oracle.power);
    // informational expectation; the ml coverage target is per replication
    const MlKind kind = parse_ml_kind(cfg.ml.kind);
    const MlNoise noise = cfg.ml.noise == "low" ? MlNoise::low : MlNoise::high;
    return ml_truth_oracle(kind, noise, cfg.ml.n, scenario_learner(cfg), seed, 200, 5000);
}

// Conditional truth of one ml replication: the error of the learner fitted
// to the replication's dataset, measured on a large fresh draw.
double ml_replication_truth(const ExperimentConfig& cfg, const SupervisedDataset& data,
                            std::uint64_t seed) {
    const auto learner = scenario_learner(cfg);
    const std::vector<double> coef = learner->fit(data.features, data.response, {});
    const MlKind kind = parse_ml_kind(cfg.ml.kind);
    const MlNoise noise = cfg.ml.noise == "low" ? MlNoise::low : MlNoise::high;
    const SupervisedDataset fresh = generate_dataset_sigma(
        kind, noise == MlNoise::low ? 3.0 : 6.0, 1000000, seed);
    double sq = 0.0;
    for (std::size_t i = 0; i < fresh.n(); ++i) {
        const double r = fresh.response[i] - predict(coef, fresh.features[i]);
        sq += r * r;
    }
    return sq / static_cast<double>(fresh.n());
}

namespace {

struct RepOutput {
    std::vector<ConfidenceInterval> cis; // aligned with the method list
    double truth = 0.0;
};

RepOutput run_replication(const ExperimentConfig& cfg, const std::vector<std::string>& methods,
                          long rep) {
    const std::uint64_t rep_seed =
        derive_seed(cfg.root_seed, {kPathDataset, static_cast<std::uint64_t>(rep)});
    const Dataset data = scenario_dataset(cfg, derive_seed(rep_seed, {1}));
    const long n = static_cast<long>(data.size());

    const bool is_ml = cfg.scenario == "ml";
    const BudgetAllocation opt_alloc = allocate(cfg.budget, n, cfg.alloc);
    const auto model = scenario_model(cfg, data);

    RepOutput out;
    if (is_ml)
        out.truth = ml_replication_truth(cfg, SupervisedDataset::from_dataset(data),
                                         derive_seed(rep_seed, {kPathTruth}));

    AnalysisOptions aopt;
    aopt.alpha = cfg.alpha;
    aopt.beta_mode = cfg.beta_mode();
    aopt.gate_bias = cfg.gate_bias;
    aopt.engine.threads = 1; // replications are the parallel axis
    if (is_ml) aopt.engine.min_inner_support = 2;

    // the debiased analysis backs both bias-corrected variants
    bool need_debias = false;
    for (const auto& m : methods)
        if (m == "bias-corrected" || m == "bias-corrected-vr") need_debias = true;

    AnalysisResult debias;
    if (need_debias) {
        if (is_ml)
            debias = run_algorithm1(SupervisedDataset::from_dataset(data), scenario_learner(cfg),
                                    cfg.budget, derive_seed(rep_seed, {kPathAnalysis}), aopt,
                                    cfg.alloc);
        else
            debias = analyze_nested(*model, data, opt_alloc, ModelConfig{},
                                    derive_seed(rep_seed, {kPathAnalysis}), aopt);
    }

    // IU-inflated baselines: full-size resamples, paper budget shape (R = 10)
    NestedRun iu_run;
    bool have_iu = false;
    for (const auto& m : methods)
        if (m == "iu-barton" || m == "iu-lamqian") have_iu = true;
    if (have_iu) {
        AllocationOverrides ov;
        ov.r = 10;
        ov.b1 = std::max(2L, cfg.budget / 10);
        ov.b2 = 0;
        ov.m = n;
        const BudgetAllocation alloc = allocate(cfg.budget, n, ov);
        EngineOptions eopt;
        eopt.threads = 1;
        eopt.run_inner_levels = false;
        eopt.run_cv_extra = false;
        eopt.run_baseline = false;
        iu_run = run_nested(*model, data, alloc, ModelConfig{},
                            derive_seed(rep_seed, {kPathBaselineMethod}), eopt);
    }

    for (const auto& method : methods) {
        if (method == "crude") {
            const ResampleCounts fhat = empirical_counts(data);
            std::vector<double> ys(static_cast<std::size_t>(cfg.budget));
            for (std::size_t r = 0; r < ys.size(); ++r)
                ys[r] = model
                            ->simulate(fhat, ModelConfig{},
                                       derive_seed(rep_seed, {kPathCrude, r}))
                            .value;
            out.cis.push_back(crude_ci(ys, cfg.alpha));
        } else if (method == "iu-barton") {
            out.cis.push_back(barton_ci(iu_run.tensor, cfg.alpha));
        } else if (method == "iu-lamqian") {
            const auto yd = iu_run.tensor.star_matrix();
            std::vector<double> if1(static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < if1.size(); ++i)
                if1[i] = if1_hat(iu_run.tensor, yd, i);
            out.cis.push_back(lamqian_ci(iu_run.tensor, if1, cfg.alpha));
        } else if (method == "bias-corrected") {
            out.cis.push_back(debias.bias_corrected);
        } else if (method == "bias-corrected-vr") {
            out.cis.push_back(debias.bias_corrected_vr);
        } else if (method == "loo-boot") {
            if (!is_ml) throw std::invalid_argument("coverage: loo-boot is ml-only");
            out.cis.push_back(loo_boot_baseline(SupervisedDataset::from_dataset(data),
                                                scenario_learner(cfg), std::max(2L, cfg.budget / 10),
                                                cfg.alpha,
                                                derive_seed(rep_seed, {kPathBaselineMethod, 2})));
        } else if (method == "repeated-cv") {
            if (!is_ml) throw std::invalid_argument("coverage: repeated-cv is ml-only");
            out.cis.push_back(repeated_cv_baseline(SupervisedDataset::from_dataset(data),
                                                   scenario_learner(cfg), cfg.ml.folds,
                                                   cfg.ml.repeats, cfg.alpha,
                                                   derive_seed(rep_seed, {kPathBaselineMethod, 3})));
        } else {
            throw std::invalid_argument("coverage: unknown method '" + method + "'");
        }
    }
    return out;
}

} // namespace

CoverageOutcome coverage_experiment(const ExperimentConfig& cfg) {
    const std::vector<std::string> methods =
        cfg.methods.empty() ? default_methods(cfg.scenario) : cfg.methods;
    const bool per_rep_truth = cfg.scenario == "ml";

    CoverageOutcome outcome;
    const double global_truth = per_rep_truth ? 0.0 : scenario_truth(cfg);

    const auto reps = static_cast<std::size_t>(cfg.macro_replications);
    std::vector<RepOutput> results(reps);
    parallel_for(reps, cfg.threads,
                 [&](std::size_t rep) { results[rep] = run_replication(cfg, methods, static_cast<long>(rep)); });

    double truth_sum = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep)
        truth_sum += per_rep_truth ? results[rep].truth : global_truth;
    outcome.truth = truth_sum / static_cast<double>(reps);

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        CoverageResult sum;
        sum.method = methods[mi];
        sum.replications = cfg.macro_replications;
        double hw = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const ConfidenceInterval& ci = results[rep].cis[mi];
            const double truth = per_rep_truth ? results[rep].truth : global_truth;
            CoverageLogRow row;
            row.method = methods[mi];
            row.rep = static_cast<long>(rep);
            row.lo = ci.lo;
            row.point = ci.point;
            row.hi = ci.hi;
            row.truth = truth;
            row.covered = ci.covers(truth);
            if (row.covered) ++sum.covered;
            hw += ci.half_width();
            outcome.log.push_back(row);
        }
        sum.coverage = static_cast<double>(sum.covered) / static_cast<double>(sum.replications);
        sum.mean_halfwidth = hw / static_cast<double>(reps);
        outcome.summary.push_back(sum);
    }
    return outcome;
}

void write_coverage_csv(const CoverageOutcome& o, const Provenance& prov,
                        const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_coverage_csv: cannot open " + path.string());
    out << "# config_hash=" << prov.config_hash << " root_seed=" << prov.root_seed
        << " mode=" << prov.mode << " gate_bias=" << (prov.gate_bias ? 1 : 0)
        << " version=" << prov.version << '\n';
    out << "method,rep,lo,point,hi,truth,covered\n";
    for (const auto& row : o.log)
        out << row.method << ',' << row.rep << ',' << format_double(row.lo) << ','
            << format_double(row.point) << ',' << format_double(row.hi) << ','
            << format_double(row.truth) << ',' << (row.covered ? 1 : 0) << '\n';
}

void write_coverage_summary_csv(const CoverageOutcome& o, const Provenance& prov,
                                const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_coverage_summary_csv: cannot open " + path.string());
    out << "# config_hash=" << prov.config_hash << " root_seed=" << prov.root_seed
        << " version=" << prov.version << '\n';
    out << "method,replications,covered,coverage,mean_halfwidth\n";
    for (const auto& s : o.summary)
        out << s.method << ',' << s.replications << ',' << s.covered << ','
            << format_double(s.coverage) << ',' << format_double(s.mean_halfwidth) << '\n';
}

} // namespace roa
