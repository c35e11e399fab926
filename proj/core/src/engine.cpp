#include "roa/engine.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "roa/parallel.hpp"
#include "roa/stats.hpp"

namespace roa {

namespace {

// Path roots for the derived seed streams. Component 0 selects the stream
// family, later components index (b1, r, b2).
enum : std::uint64_t {
    kPathB1Draw = 1,
    kPathB2Draw = 2,
    kPathB3Draw = 3,
    kPathRun = 4,      // model noise, shared across levels within one (b1, r)
    kPathBaseline = 6,
};

} // namespace

NestedRun run_nested(const Model& model, const Dataset& base, const BudgetAllocation& alloc,
                     const ModelConfig& config, std::uint64_t root_seed,
                     const EngineOptions& options) {
    const auto b1_count = static_cast<std::size_t>(alloc.b1);
    const auto r_count = static_cast<std::size_t>(alloc.r);
    const bool inner = options.run_inner_levels && alloc.b2 > 0;
    const auto b2_count = inner ? static_cast<std::size_t>(alloc.b2) : 0;

    NestedRun run;
    run.alloc = alloc;
    run.root_seed = root_seed;
    run.tensor = OutputTensor(b1_count, r_count, b2_count);
    run.tensor.counts().resize(b1_count);

    const long m2 = options.inner_m2 > 0 ? options.inner_m2 : alloc.m_star;
    const long m3 = options.inner_m3 > 0 ? options.inner_m3 : m2;

    std::atomic<long> runs{0};
    auto simulate = [&](const ResampleCounts& input, std::uint64_t seed) {
        runs.fetch_add(1, std::memory_order_relaxed);
        return model.simulate(input, config, seed).value;
    };

    auto support_of = [](const ResampleCounts& c) {
        long s = 0;
        for (long v : c.counts)
            if (v > 0) ++s;
        return s;
    };
    auto draw_inner = [&](const ResampleCounts& parent, long m_inner, const SeedPath& path) {
        ResampleCounts c = nested_counts(parent, m_inner, derive_seed(root_seed, path));
        for (std::uint64_t attempt = 1;
             support_of(c) < options.min_inner_support && attempt <= 16; ++attempt)
            c = nested_counts(parent, m_inner, derive_seed(root_seed, path.child(attempt)));
        if (support_of(c) < std::min<long>(options.min_inner_support, support_of(parent)))
            throw EvaluationError("run_nested: degenerate inner resample after 16 redraws");
        return c;
    };

    OutputTensor& t = run.tensor;
    parallel_for(b1_count, options.threads, [&](std::size_t b1) {
        const auto b1u = static_cast<std::uint64_t>(b1);
        const ResampleCounts star_counts =
            draw_counts(base, alloc.m_star, derive_seed(root_seed, {kPathB1Draw, b1u}));
        t.counts()[b1] = star_counts;

        for (std::size_t r = 0; r < r_count; ++r) {
            const auto ru = static_cast<std::uint64_t>(r);
            // common random numbers: one model-noise stream per (b1, r),
            // reused at every bootstrap level of the cell
            const std::uint64_t run_seed = derive_seed(root_seed, {kPathRun, b1u, ru});
            t.y_star(b1, r) = simulate(star_counts, run_seed);

            for (std::size_t b2 = 0; b2 < b2_count; ++b2) {
                const auto b2u = static_cast<std::uint64_t>(b2);
                const ResampleCounts c2 =
                    draw_inner(star_counts, m2, SeedPath{kPathB2Draw, b1u, ru, b2u});
                t.y_2star(b1, r, b2) = simulate(c2, run_seed);
                const ResampleCounts c3 = draw_inner(c2, m3, SeedPath{kPathB3Draw, b1u, ru, b2u});
                t.y_3star(b1, r, b2) = simulate(c3, run_seed);
            }
        }

        if (options.run_cv_extra) {
            // Y_{R+1}: same resample, a noise stream disjoint from r = 0..R-1
            const std::uint64_t cv_seed =
                derive_seed(root_seed, {kPathRun, b1u, static_cast<std::uint64_t>(r_count)});
            t.y_cv(b1) = simulate(star_counts, cv_seed);
        }
    });

    if (options.run_baseline) {
        const ResampleCounts fhat = empirical_counts(base);
        t.baseline().resize(r_count);
        for (std::size_t r = 0; r < r_count; ++r)
            t.baseline()[r] =
                simulate(fhat, derive_seed(root_seed, {kPathBaseline, static_cast<std::uint64_t>(r)}));
    }

    run.model_runs = runs.load();
    return run;
}

AnalysisResult analyze_run(NestedRun run, const AnalysisOptions& options) {
    AnalysisResult res;
    const OutputTensor& t = run.tensor;
    const std::size_t b1_count = t.b1_count();
    const std::size_t r_count = t.r_count();
    if (b1_count < 2 || r_count < 2)
        throw std::invalid_argument("analyze_run: need B1 >= 2 and R >= 2");
    if (t.b2_count() < 1)
        throw std::invalid_argument("analyze_run: need B2 >= 1 (inner levels present)");

    res.fib.resize(t.cell_count());
    res.yd.resize(t.cell_count());
    res.yd_vr.resize(t.cell_count());
    std::vector<double> w(t.cell_count()), w_cv(t.cell_count());

    for (std::size_t b1 = 0; b1 < b1_count; ++b1) {
        std::vector<double> w_row(r_count), c_row(r_count);
        for (std::size_t r = 0; r < r_count; ++r) {
            const FibCell cell = t.cell(b1, r);
            FibResult& fr = res.fib[b1 * r_count + r];
            fr.delta_star = delta_star(cell);
            fr.gamma_hat = gamma_hat(cell);
            fr.w_hat = fr.delta_star + fr.gamma_hat;
            const TTestResult tt = t_test(cell, options.alpha);
            fr.t_stat = tt.t_stat;
            fr.significant = tt.significant;
            fr.control = control_value(cell);
            if (options.gate_bias && !fr.significant) fr.w_hat = 0.0;
            w_row[r] = fr.w_hat;
            c_row[r] = fr.control;
        }
        // a two-point regression fits the slope exactly and destroys the
        // variance reduction; the control variate needs R >= 3
        const double c1 = (r_count >= 3) ? cv_coefficient(w_row, c_row) : 0.0;
        for (std::size_t r = 0; r < r_count; ++r) {
            FibResult& fr = res.fib[b1 * r_count + r];
            fr.c1_hat = c1;
            fr.w_hat_cv = fr.w_hat - c1 * fr.control;
            const std::size_t idx = b1 * r_count + r;
            w[idx] = fr.w_hat;
            w_cv[idx] = fr.w_hat_cv;
            res.yd[idx] = t.y_star(b1, r) - fr.w_hat;
            res.yd_vr[idx] = t.y_star(b1, r) - fr.w_hat_cv;
        }
    }

    res.w_mean = mean(w);
    res.w_cv_mean = mean(w_cv);
    res.plug_in_mean = mean(t.star_matrix());
    if (!t.baseline().empty()) res.baseline_mean = mean(t.baseline());

    const ScoreConstants k =
        make_score_constants(run.alloc.m_star, static_cast<long>(t.counts().front().counts.size()));
    res.hoif = hoif_diagnostics(t, res.yd, k, options.beta_mode);

    res.variance = total_debiased_variance(t, w);
    res.variance_vr = total_debiased_variance(t, w_cv);

    if (!t.baseline().empty() && t.baseline().size() >= 2)
        res.crude = crude_ci(t.baseline(), options.alpha);
    res.barton = barton_ci(t, options.alpha);
    res.lamqian = lamqian_ci(t, res.hoif.if1, options.alpha);
    res.bias_corrected = bias_corrected_ci(res.yd, res.hoif.beta_hat, res.variance, b1_count,
                                           r_count, options.alpha, "bias-corrected");
    res.bias_corrected_vr = bias_corrected_ci(res.yd_vr, res.hoif.beta_hat, res.variance_vr,
                                              b1_count, r_count, options.alpha,
                                              "bias-corrected-vr");

    res.run = std::move(run);
    return res;
}

AnalysisResult analyze_nested(const Model& model, const Dataset& base,
                              const BudgetAllocation& alloc, const ModelConfig& config,
                              std::uint64_t root_seed, const AnalysisOptions& options) {
    NestedRun run = run_nested(model, base, alloc, config, root_seed, options.engine);
    return analyze_run(std::move(run), options);
}

} // namespace roa
