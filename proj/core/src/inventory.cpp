#include "roa/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "roa/resample.hpp"

namespace roa {

void InventoryPolicy::validate() const {
    if (!(0.0 <= s && s < S)) throw std::invalid_argument("InventoryPolicy: need 0 <= s < S");
}

void CostStructure::validate() const {
    if (holding < 0 || shortage < 0 || order_fixed < 0 || order_unit < 0)
        throw std::invalid_argument("CostStructure: costs must be >= 0");
}

CostStructure calibrated_costs() {
    // classic coefficient family, order_fixed calibrated once against the
    // long-run cost table and frozen here
    CostStructure c;
    c.holding = 2.5;
    c.shortage = 10.0;
    c.order_fixed = 28.0;
    c.order_unit = 3.0;
    return c;
}

double calibrated_lead_prob() { return 0.2; }

namespace {

struct CostTally {
    double total = 0.0;
    long periods = 0;
};

// State-carrying core: runs `count` periods, charging holding/shortage on the
// post-demand net level and reviewing (order up to S) at period end. Orders
// placed at the end of period p are received at the start of period
// p + 1 + lead.
class InventoryState {
  public:
    InventoryState(const InventoryPolicy& policy, const CostStructure& costs, double lead_prob,
                   std::uint64_t lead_seed)
        : policy_(policy), costs_(costs), lead_prob_(lead_prob), lead_rng_(lead_seed),
          on_hand_(policy.S) {}

    template <typename DemandFn>
    CostTally run(long count, DemandFn&& next_demand) {
        CostTally tally;
        for (long p = 0; p < count; ++p) {
            // receive due orders at period start
            for (auto& o : pipeline_) --o.first;
            while (!pipeline_.empty() && pipeline_.front().first <= 0) {
                on_hand_ += pipeline_.front().second;
                pipeline_.pop_front();
            }

            const double d = next_demand();
            on_hand_ -= d;

            double cost = costs_.holding * std::max(on_hand_, 0.0) +
                          costs_.shortage * std::max(-on_hand_, 0.0);

            double position = on_hand_;
            for (const auto& o : pipeline_) position += o.second;
            if (position < policy_.s) {
                const double qty = policy_.S - position;
                cost += costs_.order_fixed + costs_.order_unit * qty;
                const bool delayed = lead_prob_ > 0.0 && lead_rng_.next_double() < lead_prob_;
                if (!delayed)
                    on_hand_ += qty;
                else
                    pipeline_.emplace_back(2, qty); // received at start of p + 2
            }

            tally.total += cost;
            ++tally.periods;
        }
        return tally;
    }

  private:
    InventoryPolicy policy_;
    CostStructure costs_;
    double lead_prob_;
    Rng lead_rng_;
    double on_hand_;
    std::deque<std::pair<int, double>> pipeline_; // (periods until receipt, qty)
};

} // namespace

ModelOutput run_inventory(const ResampleCounts& demand, const InventoryPolicy& policy,
                          const CostStructure& costs, long periods, long warmup,
                          std::uint64_t seed, double lead_prob) {
    policy.validate();
    costs.validate();
    if (periods < 1) throw std::invalid_argument("run_inventory: periods must be >= 1");
    if (warmup < 0) throw std::invalid_argument("run_inventory: warmup must be >= 0");

    WeightedQuantile quantile(demand);
    Rng rng(seed);
    auto next_demand = [&]() { return quantile(rng.next_double()); };

    InventoryState state(policy, costs, lead_prob, derive_seed(seed, {1}));
    if (warmup > 0) state.run(warmup, next_demand); // state carries over
    const CostTally tally = state.run(periods, next_demand);

    ModelOutput out;
    out.value = tally.total / static_cast<double>(tally.periods);
    if (!std::isfinite(out.value)) throw EvaluationError("run_inventory: non-finite cost");
    return out;
}

namespace {

class InventoryModel final : public Model {
  public:
    InventoryModel(InventoryPolicy policy, CostStructure costs, long periods, long warmup,
                   double lead_prob)
        : policy_(policy), costs_(costs), periods_(periods), warmup_(warmup),
          lead_prob_(lead_prob) {
        policy_.validate();
        costs_.validate();
    }

    ModelOutput simulate(const ResampleCounts& input, const ModelConfig&,
                         std::uint64_t seed) const override {
        return run_inventory(input, policy_, costs_, periods_, warmup_, seed, lead_prob_);
    }

  private:
    InventoryPolicy policy_;
    CostStructure costs_;
    long periods_;
    long warmup_;
    double lead_prob_;
};

double draw_demand(DemandKind kind, Rng& rng) {
    switch (kind) {
        case DemandKind::perfect_poisson:
            return static_cast<double>(rng.next_poisson(30.0));
        case DemandKind::corrupt_poisson:
            return static_cast<double>(rng.next_poisson(25.0) + rng.next_poisson(5.0));
        case DemandKind::zero:
            return 0.0;
    }
    throw std::logic_error("draw_demand: unknown kind");
}

} // namespace

std::shared_ptr<Model> make_inventory_model(InventoryPolicy policy, CostStructure costs,
                                            long periods, long warmup, double lead_prob) {
    return std::make_shared<InventoryModel>(policy, costs, periods, warmup, lead_prob);
}

Dataset gen_perfect_poisson(long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_perfect_poisson: n must be >= 1");
    Rng rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = static_cast<double>(rng.next_poisson(30.0));
    return Dataset::from_values(std::move(v), "perfect_poisson");
}

Dataset gen_corrupt_poisson(long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_corrupt_poisson: n must be >= 1");
    Rng rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v)
        x = static_cast<double>(rng.next_poisson(25.0) + rng.next_poisson(5.0));
    return Dataset::from_values(std::move(v), "corrupt_poisson");
}

double long_run_reference(const InventoryPolicy& policy, const CostStructure& costs,
                          DemandKind generator, std::uint64_t seed, double lead_prob) {
    policy.validate();
    costs.validate();
    Rng rng(seed);
    auto next_demand = [&]() { return draw_demand(generator, rng); };

    InventoryState state(policy, costs, lead_prob, derive_seed(seed, {1}));
    state.run(10000, next_demand);

    double sum_batch_means = 0.0;
    constexpr long kBatches = 100;
    constexpr long kBatchPeriods = 30;
    for (long b = 0; b < kBatches; ++b) {
        const CostTally t = state.run(kBatchPeriods, next_demand);
        sum_batch_means += t.total / static_cast<double>(t.periods);
    }
    return sum_batch_means / static_cast<double>(kBatches);
}

std::vector<InventoryPolicy> inventory_scenarios() {
    return {{20.0, 40.0}, {20.0, 45.0}, {20.0, 50.0}, {20.0, 55.0}};
}

} // namespace roa
