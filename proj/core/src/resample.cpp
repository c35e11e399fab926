#include "roa/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace roa {

ResampleCounts::ResampleCounts(std::vector<long> c, const Dataset& b)
    : counts(std::move(c)), base(&b) {
    m = std::accumulate(counts.begin(), counts.end(), 0L);
    validate();
}

void ResampleCounts::validate() const {
    if (!base) throw std::invalid_argument("ResampleCounts: no base dataset");
    if (counts.size() != base->size())
        throw std::invalid_argument("ResampleCounts: count length != base size");
    long total = 0;
    for (long c : counts) {
        if (c < 0) throw std::invalid_argument("ResampleCounts: negative count");
        total += c;
    }
    if (total != m || m < 1)
        throw std::invalid_argument("ResampleCounts: counts must sum to m >= 1");
}

namespace {

// Multinomial(m, w/sum(w)) by sequential binomial splits over the support.
std::vector<long> multinomial_split(const std::vector<double>& weights, long m, Rng& rng) {
    const std::size_t n = weights.size();
    std::vector<long> out(n, 0);
    double remaining_w = std::accumulate(weights.begin(), weights.end(), 0.0);
    long remaining_m = m;
    for (std::size_t i = 0; i + 1 < n && remaining_m > 0; ++i) {
        if (weights[i] <= 0.0) continue;
        double p = weights[i] / remaining_w;
        long k = (p >= 1.0) ? remaining_m : rng.next_binomial(remaining_m, p);
        out[i] = k;
        remaining_m -= k;
        remaining_w -= weights[i];
        if (remaining_w <= 0.0) break;
    }
    if (remaining_m > 0) out[n - 1] += remaining_m;
    return out;
}

} // namespace

ResampleCounts draw_counts(const Dataset& base, long m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("draw_counts: m must be >= 1");
    Rng rng(seed);
    std::vector<double> w(base.size(), 1.0);
    return ResampleCounts(multinomial_split(w, m, rng), base);
}

ResampleCounts empirical_counts(const Dataset& base) {
    return ResampleCounts(std::vector<long>(base.size(), 1L), base);
}

ResampleCounts nested_counts(const ResampleCounts& counts, long m_inner, std::uint64_t seed) {
    if (m_inner < 1) throw std::invalid_argument("nested_counts: m_inner must be >= 1");
    counts.validate();
    Rng rng(seed);
    std::vector<double> w(counts.counts.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(counts.counts[i]);
    return ResampleCounts(multinomial_split(w, m_inner, rng), *counts.base);
}

Dataset materialize(const ResampleCounts& counts) {
    counts.validate();
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(counts.m));
    for (std::size_t i = 0; i < counts.counts.size(); ++i)
        for (long k = 0; k < counts.counts[i]; ++k) rows.push_back(counts.base->row(i));
    return Dataset(std::move(rows), counts.base->label());
}

double empirical_quantile(const Dataset& data, double u) {
    if (!data.scalar()) throw std::invalid_argument("empirical_quantile: scalar data required");
    if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("empirical_quantile: u must be in [0,1)");
    std::vector<double> v = data.values();
    std::sort(v.begin(), v.end());
    const auto n = static_cast<double>(v.size());
    auto k = static_cast<std::size_t>(std::ceil(u * n));
    if (k < 1) k = 1;
    return v[k - 1];
}

WeightedQuantile::WeightedQuantile(const ResampleCounts& counts) {
    counts.validate();
    if (!counts.base->scalar())
        throw std::invalid_argument("WeightedQuantile: scalar base required");
    std::vector<std::pair<double, long>> support;
    for (std::size_t i = 0; i < counts.counts.size(); ++i)
        if (counts.counts[i] > 0) support.emplace_back(counts.base->value(i), counts.counts[i]);
    std::sort(support.begin(), support.end());
    double cum = 0.0;
    const double total = static_cast<double>(counts.m);
    for (const auto& [v, c] : support) {
        cum += static_cast<double>(c) / total;
        sorted_values_.push_back(v);
        cum_.push_back(cum);
    }
    cum_.back() = 1.0;
}

WeightedQuantile::WeightedQuantile(const Dataset& scalar_data) {
    if (!scalar_data.scalar())
        throw std::invalid_argument("WeightedQuantile: scalar data required");
    std::vector<double> v = scalar_data.values();
    std::sort(v.begin(), v.end());
    const double total = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        sorted_values_.push_back(v[i]);
        cum_.push_back(static_cast<double>(i + 1) / total);
    }
    cum_.back() = 1.0;
}

double WeightedQuantile::operator()(double u) const {
    if (!(u >= 0.0 && u < 1.0))
        throw std::invalid_argument("WeightedQuantile: u must be in [0,1)");
    // left-continuous inverse CDF: smallest value with cum >= u; u == 0
    // maps to the minimum
    auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cum_.begin());
    if (idx >= sorted_values_.size()) idx = sorted_values_.size() - 1;
    return sorted_values_[idx];
}

} // namespace roa
