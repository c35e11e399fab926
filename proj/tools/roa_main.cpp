// roa: robust Monte-Carlo output analysis CLI
//
// Subcommands:
//   analyze         one dataset -> debiased analysis report
//   inventory-demo  scenario table and per-method intervals for the (s,S) example
//   ml-demo         one generated regression dataset, all methods
//   coverage        full coverage experiment from a config file

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "roa/coverage.hpp"
#include "roa/inventory.hpp"
#include "roa/ml.hpp"
#include "roa/report.hpp"

namespace fs = std::filesystem;
using namespace roa;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<long> budget;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    bool gate_bias = false;
    std::optional<int> threads;
    std::vector<long> alloc_override; // B1,R,B2
    std::vector<std::string> methods;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON experiment config");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--budget", args.budget, "total model-run budget N");
    cmd->add_option("--alpha", args.alpha, "CI significance level");
    cmd->add_option("--seed", args.seed, "root seed (ROA_SEED env overrides)");
    cmd->add_option("--mode", args.mode, "HOIF bias prefactor: eq21 | eq22")
        ->check(CLI::IsMember({"eq21", "eq22"}));
    cmd->add_flag("--gate-bias", args.gate_bias,
                  "zero per-output bias estimates that fail the significance test");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    cmd->add_option("--alloc", args.alloc_override, "override allocation B1,R,B2")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--method", args.methods, "methods for coverage runs")->delimiter(',');
}

ExperimentConfig load_config(const CommonArgs& args) {
    ExperimentConfig cfg = args.config_path.empty() ? parse_config_text("")
                                                    : parse_config(args.config_path);
    if (args.budget) cfg.budget = *args.budget;
    if (args.alpha) cfg.alpha = *args.alpha;
    if (args.seed && !std::getenv("ROA_SEED")) cfg.root_seed = *args.seed;
    if (args.mode) cfg.mode = *args.mode;
    if (args.gate_bias) cfg.gate_bias = true;
    if (args.threads) cfg.threads = *args.threads;
    if (!args.methods.empty()) cfg.methods = args.methods;
    if (!args.alloc_override.empty()) {
        cfg.alloc.b1 = args.alloc_override[0];
        cfg.alloc.r = args.alloc_override[1];
        cfg.alloc.b2 = args.alloc_override[2];
    }
    if (args.out_dir != ".") cfg.out_dir = args.out_dir;
    cfg.validate();
    return cfg;
}

AnalysisOptions analysis_options(const ExperimentConfig& cfg) {
    AnalysisOptions opt;
    opt.alpha = cfg.alpha;
    opt.beta_mode = cfg.beta_mode();
    opt.gate_bias = cfg.gate_bias;
    opt.engine.threads = cfg.threads;
    return opt;
}

void print_ci(const ConfidenceInterval& ci) {
    std::printf("  %-18s point %12.4f  [%12.4f, %12.4f]  half-width %10.4f\n",
                ci.method.c_str(), ci.point, ci.lo, ci.hi, ci.half_width());
}

AnalysisResult run_analysis(const ExperimentConfig& cfg, const Dataset& data) {
    const long n = static_cast<long>(data.size());
    const AnalysisOptions opt = analysis_options(cfg);
    if (cfg.scenario == "ml")
        return run_algorithm1(SupervisedDataset::from_dataset(data),
                              cfg.ml.learner == "constant" ? make_constant_learner()
                                                           : make_ols_learner(),
                              cfg.budget, cfg.root_seed, opt, cfg.alloc);
    const BudgetAllocation alloc = allocate(cfg.budget, n, cfg.alloc);
    std::shared_ptr<Model> model;
    if (cfg.scenario == "inventory") {
        model = make_inventory_model({cfg.inventory.s, cfg.inventory.S}, calibrated_costs(),
                                     cfg.inventory.periods, cfg.inventory.warmup);
    } else {
        model = make_mean_model(cfg.oracle.k, cfg.oracle.power);
    }
    return analyze_nested(*model, data, alloc, ModelConfig{}, cfg.root_seed, opt);
}

Dataset default_dataset(const ExperimentConfig& cfg) {
    const std::uint64_t seed = derive_seed(cfg.root_seed, {100});
    if (cfg.scenario == "inventory")
        return cfg.inventory.generator == "corrupt" ? gen_corrupt_poisson(cfg.inventory.n, seed)
                                                    : gen_perfect_poisson(cfg.inventory.n, seed);
    if (cfg.scenario == "ml")
        return generate_dataset(parse_ml_kind(cfg.ml.kind),
                                cfg.ml.noise == "low" ? MlNoise::low : MlNoise::high, cfg.ml.n,
                                seed)
            .to_dataset();
    Rng rng(seed);
    std::vector<double> v(static_cast<std::size_t>(cfg.oracle.n));
    for (auto& x : v) x = cfg.oracle.mu + cfg.oracle.sigma * rng.next_normal();
    return Dataset::from_values(std::move(v), "oracle");
}

int cmd_analyze(const CommonArgs& args, const std::string& data_path) {
    ExperimentConfig cfg = load_config(args);
    const Dataset data = data_path.empty() ? default_dataset(cfg) : read_csv(data_path);
    const AnalysisResult res = run_analysis(cfg, data);
    const Provenance prov = make_provenance(cfg);

    fs::create_directories(cfg.out_dir);
    write_report_json(res, prov, fs::path(cfg.out_dir) / "report.json");
    write_cells_csv(res, prov, fs::path(cfg.out_dir) / "cells.csv");

    std::printf("allocation: %s\n", describe(res.run.alloc).c_str());
    std::printf("point estimates: plug-in %.4f  debiased %.4f  debiased-vr %.4f\n",
                res.plug_in_mean, res.bias_corrected.point, res.bias_corrected_vr.point);
    std::printf("bias: W-bar %.5f  W-bar(cv) %.5f  beta-hat(%s) %.5f\n", res.w_mean,
                res.w_cv_mean, to_string(res.hoif.mode).c_str(), res.hoif.beta_hat);
    std::printf("variance: sigma2_u %.5f  iu %.5f (raw %.5f)  total %.5f\n",
                res.variance.sigma2_u, res.variance.iu_var, res.variance.iu_var_raw,
                res.variance.total_debiased);
    if (!res.crude.method.empty()) print_ci(res.crude);
    print_ci(res.barton);
    print_ci(res.lamqian);
    print_ci(res.bias_corrected);
    print_ci(res.bias_corrected_vr);
    std::printf("wrote %s and %s\n", (fs::path(cfg.out_dir) / "report.json").string().c_str(),
                (fs::path(cfg.out_dir) / "cells.csv").string().c_str());
    return 0;
}

int cmd_inventory_demo(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    cfg.scenario = "inventory";
    const CostStructure costs = calibrated_costs();
    fs::create_directories(cfg.out_dir);

    std::printf("(s,S) scenario table, calibrated costs (holding %.2f shortage %.2f "
                "order_fixed %.2f order_unit %.2f)\n",
                costs.holding, costs.shortage, costs.order_fixed, costs.order_unit);
    std::printf("%-10s %6s %6s %14s %14s\n", "scenario", "s", "S", "theta(perfect)",
                "theta(corrupt)");
    std::vector<double> ref_p, ref_c;
    int idx = 1;
    for (const auto& pol : inventory_scenarios()) {
        const double tp = long_run_reference(pol, costs, DemandKind::perfect_poisson,
                                             derive_seed(cfg.root_seed, {1}));
        const double tc = long_run_reference(pol, costs, DemandKind::corrupt_poisson,
                                             derive_seed(cfg.root_seed, {2}));
        ref_p.push_back(tp);
        ref_c.push_back(tc);
        std::printf("%-10d %6.0f %6.0f %14.3f %14.3f\n", idx++, pol.s, pol.S, tp, tc);
    }

    // per-scenario intervals for one observed demand dataset of each kind
    std::ofstream plot(fs::path(cfg.out_dir) / "plotdata_inventory.csv");
    plot << "method,scenario,generator,n,lo,point,hi,reference\n";
    for (const std::string gen : {"perfect", "corrupt"}) {
        for (long n : {10L, 50L}) {
            ExperimentConfig c2 = cfg;
            c2.inventory.generator = gen;
            c2.inventory.n = n;
            const Dataset demand =
                gen == "corrupt"
                    ? gen_corrupt_poisson(
                          n, derive_seed(cfg.root_seed, {3, static_cast<std::uint64_t>(n)}))
                    : gen_perfect_poisson(
                          n, derive_seed(cfg.root_seed, {4, static_cast<std::uint64_t>(n)}));
            int s_idx = 0;
            for (const auto& pol : inventory_scenarios()) {
                c2.inventory.s = pol.s;
                c2.inventory.S = pol.S;
                const AnalysisResult res = run_analysis(c2, demand);
                const double ref = (gen == "corrupt" ? ref_c : ref_p)[s_idx];
                for (const ConfidenceInterval* ci :
                     {&res.crude, &res.barton, &res.bias_corrected, &res.bias_corrected_vr}) {
                    if (ci->method.empty()) continue;
                    plot << ci->method << ',' << (s_idx + 1) << ',' << gen << ',' << n << ','
                         << format_double(ci->lo) << ',' << format_double(ci->point) << ','
                         << format_double(ci->hi) << ',' << format_double(ref) << '\n';
                }
                ++s_idx;
            }
        }
    }
    std::printf("wrote %s\n", (fs::path(cfg.out_dir) / "plotdata_inventory.csv").string().c_str());
    return 0;
}

int cmd_ml_demo(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args);
    cfg.scenario = "ml";
    fs::create_directories(cfg.out_dir);

    const auto learner =
        cfg.ml.learner == "constant" ? make_constant_learner() : make_ols_learner();
    const SupervisedDataset data =
        generate_dataset(parse_ml_kind(cfg.ml.kind),
                         cfg.ml.noise == "low" ? MlNoise::low : MlNoise::high, cfg.ml.n,
                         derive_seed(cfg.root_seed, {100}));

    const AnalysisResult res =
        run_algorithm1(data, learner, cfg.budget, cfg.root_seed, analysis_options(cfg), cfg.alloc);
    const Provenance prov = make_provenance(cfg);
    write_report_json(res, prov, fs::path(cfg.out_dir) / "report.json");
    write_cells_csv(res, prov, fs::path(cfg.out_dir) / "cells.csv");

    const ConfidenceInterval loo = loo_boot_baseline(data, learner, std::max(2L, cfg.budget / 10),
                                                     cfg.alpha, derive_seed(cfg.root_seed, {101}));
    const ConfidenceInterval cv = repeated_cv_baseline(data, learner, cfg.ml.folds, cfg.ml.repeats,
                                                       cfg.alpha, derive_seed(cfg.root_seed, {102}));

    std::printf("dataset: %s/%s n=%ld, learner=%s\n", cfg.ml.kind.c_str(), cfg.ml.noise.c_str(),
                cfg.ml.n, cfg.ml.learner.c_str());
    std::printf("allocation: %s\n", describe(res.run.alloc).c_str());
    print_ci(res.bias_corrected_vr);
    print_ci(res.bias_corrected);
    print_ci(res.barton);
    print_ci(res.lamqian);
    print_ci(loo);
    print_ci(cv);

    std::ofstream plot(fs::path(cfg.out_dir) / "plotdata_ml.csv");
    plot << "method,scenario,lo,point,hi\n";
    const std::string scen = cfg.ml.kind + "/" + cfg.ml.noise;
    for (const ConfidenceInterval* ci :
         {&res.bias_corrected_vr, &res.bias_corrected, &res.barton, &res.lamqian, &loo, &cv})
        plot << ci->method << ',' << scen << ',' << format_double(ci->lo) << ','
             << format_double(ci->point) << ',' << format_double(ci->hi) << '\n';
    std::printf("wrote %s\n", (fs::path(cfg.out_dir) / "plotdata_ml.csv").string().c_str());
    return 0;
}

int cmd_coverage(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args);
    const CoverageOutcome outcome = coverage_experiment(cfg);
    const Provenance prov = make_provenance(cfg);

    fs::create_directories(cfg.out_dir);
    write_coverage_csv(outcome, prov, fs::path(cfg.out_dir) / "coverage.csv");
    write_coverage_summary_csv(outcome, prov, fs::path(cfg.out_dir) / "coverage_summary.csv");

    std::printf("scenario %s, %ld replications, truth %.4f%s\n", cfg.scenario.c_str(),
                cfg.macro_replications, outcome.truth,
                cfg.scenario == "ml" ? " (mean of per-replication truths)" : "");
    std::printf("%-20s %10s %10s %14s\n", "method", "covered", "coverage", "mean half-width");
    for (const auto& s : outcome.summary)
        std::printf("%-20s %6ld/%-3ld %10.3f %14.4f\n", s.method.c_str(), s.covered,
                    s.replications, s.coverage, s.mean_halfwidth);
    std::printf("wrote %s and %s\n", (fs::path(cfg.out_dir) / "coverage.csv").string().c_str(),
                (fs::path(cfg.out_dir) / "coverage_summary.csv").string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust Monte-Carlo output analysis"};
    app.require_subcommand(1);

    CommonArgs analyze_args, inv_args, ml_args, cov_args;
    std::string data_path;

    CLI::App* analyze = app.add_subcommand("analyze", "analyze one dataset");
    add_common(analyze, analyze_args);
    analyze->add_option("--data", data_path, "input dataset CSV (header row)");

    CLI::App* inv = app.add_subcommand("inventory-demo", "reproduce the (s,S) illustration data");
    add_common(inv, inv_args);

    CLI::App* ml = app.add_subcommand("ml-demo", "single ML error-estimation run, all methods");
    add_common(ml, ml_args);

    CLI::App* cov = app.add_subcommand("coverage", "coverage experiment");
    add_common(cov, cov_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_args, data_path);
        if (inv->parsed()) return cmd_inventory_demo(inv_args);
        if (ml->parsed()) return cmd_ml_demo(ml_args);
        if (cov->parsed()) return cmd_coverage(cov_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
