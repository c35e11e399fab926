#include <benchmark/benchmark.h>

#include "roa/engine.hpp"
#include "roa/hoif.hpp"
#include "roa/inventory.hpp"
#include "roa/ml.hpp"

using namespace roa;

namespace {

Dataset make_data(long n) {
    Rng rng(7);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.next_normal();
    return Dataset::from_values(std::move(v));
}

void BM_derive_seed(benchmark::State& state) {
    std::uint64_t s = 0;
    for (auto _ : state) {
        s ^= derive_seed(42, {1, 2, 3, 4, 5});
    }
    benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_derive_seed);

void BM_draw_counts(benchmark::State& state) {
    const Dataset d = make_data(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(draw_counts(d, state.range(0) / 10 + 1, seed++));
    }
}
BENCHMARK(BM_draw_counts)->Arg(100)->Arg(1000);

void BM_nested_counts(benchmark::State& state) {
    const Dataset d = make_data(100);
    const ResampleCounts c = draw_counts(d, 50, 3);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nested_counts(c, 50, seed++));
    }
}
BENCHMARK(BM_nested_counts);

void BM_inventory_run(benchmark::State& state) {
    const Dataset d = gen_perfect_poisson(25, 5);
    const ResampleCounts c = draw_counts(d, 25, 1);
    const InventoryPolicy pol{20, 45};
    const CostStructure costs = calibrated_costs();
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_inventory(c, pol, costs, 30, 1000, seed++));
    }
}
BENCHMARK(BM_inventory_run);

void BM_nested_analysis(benchmark::State& state) {
    const Dataset d = make_data(50);
    const auto model = make_mean_model(2, 2);
    AllocationOverrides ov;
    ov.b1 = 20;
    ov.r = 3;
    ov.b2 = 2;
    const BudgetAllocation alloc = allocate(500, 50, ov);
    AnalysisOptions opt;
    opt.engine.threads = 1;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze_nested(*model, d, alloc, {}, seed++, opt));
    }
}
BENCHMARK(BM_nested_analysis);

void BM_beta_hat_pairsum(benchmark::State& state) {
    const long n = state.range(0);
    const Dataset d = make_data(n);
    const std::size_t B1 = 50, R = 5;
    OutputTensor t(B1, R, 1);
    Rng rng(11);
    for (std::size_t b = 0; b < B1; ++b) {
        t.counts().push_back(draw_counts(d, n / 2, 100 + b));
        for (std::size_t r = 0; r < R; ++r) {
            t.y_star(b, r) = rng.next_normal();
            t.y_2star(b, r, 0) = rng.next_normal();
            t.y_3star(b, r, 0) = rng.next_normal();
        }
    }
    const ScoreConstants k = make_score_constants(n / 2, n);
    const std::vector<double> yd = t.star_matrix();
    for (auto _ : state) {
        benchmark::DoNotOptimize(beta_hat(t, yd, k, BetaMode::eq21));
    }
}
BENCHMARK(BM_beta_hat_pairsum)->Arg(100)->Arg(400);

void BM_ols_fit(benchmark::State& state) {
    const SupervisedDataset d = generate_dataset(MlKind::linear, MlNoise::low,
                                                 state.range(0), 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_ols(d));
    }
}
BENCHMARK(BM_ols_fit)->Arg(10)->Arg(100);

} // namespace

BENCHMARK_MAIN();
