#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "roa/dataset.hpp"
#include "roa/model.hpp"

namespace roa {

/// Order up to S when the reviewed position falls below s.
struct InventoryPolicy {
    double s = 20.0;
    double S = 40.0;

    void validate() const;
};

struct CostStructure {
    double holding = 1.0;     // per unit per period
    double shortage = 5.0;    // per backlogged unit per period
    double order_fixed = 32.0;
    double order_unit = 3.0;

    void validate() const;
};

/// Frozen configuration of the cost model: classic coefficients calibrated
/// once against the long-run reference table, plus a sub-period
/// replenishment delay: each order independently arrives after one period
/// with probability lead_prob, otherwise immediately. Calibration notes
/// live in the README.
CostStructure calibrated_costs();
double calibrated_lead_prob();

/// Average per-period total cost over `periods` after discarding `warmup`
/// periods; inventory state carries across the warm-up boundary. Demands are
/// drawn i.i.d. from the distribution defined by `demand` via its inverse
/// CDF, one uniform per period.
ModelOutput run_inventory(const ResampleCounts& demand, const InventoryPolicy& policy,
                          const CostStructure& costs, long periods, long warmup,
                          std::uint64_t seed, double lead_prob = calibrated_lead_prob());

/// Model-API adapter: a fixed (policy, costs, horizon) inventory simulation
/// whose input distribution is the per-period demand.
std::shared_ptr<Model> make_inventory_model(InventoryPolicy policy, CostStructure costs,
                                            long periods, long warmup,
                                            double lead_prob = calibrated_lead_prob());

enum class DemandKind { perfect_poisson, corrupt_poisson, zero };

/// n i.i.d. Poisson(30) demand observations.
Dataset gen_perfect_poisson(long n, std::uint64_t seed);

/// n i.i.d. Poisson(25) + Poisson(5) observations (mean 30, integer).
Dataset gen_corrupt_poisson(long n, std::uint64_t seed);

/// Batch-means estimate of the long-run expected 30-period cost: 10,000
/// warm-up periods, then 100 batches of 30 periods with fresh demand from
/// the generator.
double long_run_reference(const InventoryPolicy& policy, const CostStructure& costs,
                          DemandKind generator, std::uint64_t seed,
                          double lead_prob = calibrated_lead_prob());

/// The four illustration scenarios: s = 20, S in {40, 45, 50, 55}.
std::vector<InventoryPolicy> inventory_scenarios();

} // namespace roa
