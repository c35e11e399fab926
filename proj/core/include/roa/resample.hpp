#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "roa/dataset.hpp"
#include "roa/rng.hpp"

namespace roa {

/// Multinomial count vector N over base-dataset indices; defines one
/// bootstrap distribution F* with mass N_i/m on row i of the base dataset.
/// Nesting keeps accumulating counts against the same base, so F**, F***
/// stay addressable by base index.
struct ResampleCounts {
    std::vector<long> counts; // length n of the base dataset
    long m = 0;               // total draws, = sum(counts)
    const Dataset* base = nullptr;

    ResampleCounts() = default;
    ResampleCounts(std::vector<long> c, const Dataset& b);

    std::size_t n() const { return counts.size(); }
    void validate() const;
};

/// m i.i.d. draws from the uniform distribution over the n base rows,
/// realized as n-1 sequential binomial splits (exact, O(n + m) expected).
ResampleCounts draw_counts(const Dataset& base, long m, std::uint64_t seed);

/// Counts for the un-resampled empirical distribution F-hat (one per row).
ResampleCounts empirical_counts(const Dataset& base);

/// m_inner draws with replacement from the weighted support of `counts`.
/// The result references the original base dataset.
ResampleCounts nested_counts(const ResampleCounts& counts, long m_inner, std::uint64_t seed);

/// Concrete sample: row i repeated counts[i] times, ascending base index.
Dataset materialize(const ResampleCounts& counts);

/// Left-continuous inverse CDF of a scalar dataset: the ceil(u*n)-th order
/// statistic, u in [0, 1).
double empirical_quantile(const Dataset& data, double u);

/// Discrete inverse-CDF sampler over a weighted scalar support. Used by
/// the simulation models to draw model inputs from a ResampleCounts
/// distribution with one uniform per draw (common-random-number friendly).
class WeightedQuantile {
  public:
    explicit WeightedQuantile(const ResampleCounts& counts);
    explicit WeightedQuantile(const Dataset& scalar_data);

    /// Value at the left-continuous inverse CDF for u in [0, 1).
    double operator()(double u) const;

  private:
    std::vector<double> sorted_values_; // support, ascending
    std::vector<double> cum_;           // cumulative probabilities, last == 1
};

} // namespace roa
