#pragma once

#include <span>
#include <vector>

#include "roa/tensor.hpp"

namespace roa {

/// Variance decomposition of the debiased estimator. The ANOVA difference in
/// iu_var_raw can be negative; the floored value is what CI construction
/// uses, the raw value is always persisted.
struct VarianceReport {
    double sigma2_u = 0.0;       // pooled simulation variance
    double iu_var = 0.0;         // ANOVA IU variance, floored at 0
    double iu_var_raw = 0.0;     // unfloored ANOVA difference
    double bias_var = 0.0;       // grand-mean squared deviations of W group
    double bias_cov = 0.0;       // cross-product group (signed)
    double y_var_group = 0.0;    // grand-mean squared deviations of Y group
    double between_group = 0.0;  // between-b1 mean square
    double within_group = 0.0;   // within-b1 correction (signed, enters negatively)
    double total_debiased = 0.0; // sum of the five groups
    double crude = 0.0;          // sample variance of outputs at one input model
};

/// ANOVA estimate of Var_F(theta(F)): between-b1 mean square minus the
/// within-b1 correction. Raw value (may be negative).
double iu_variance(const OutputTensor& tensor);

/// Within-b1 residual sum of squares pooled over b1, divided by B1 (R - 1).
double pooled_simulation_variance(const OutputTensor& tensor);

/// Unbiased sample variance of R replications.
double crude_variance(std::span<const double> outputs);

/// Full variance of the debiased estimator, all five summation groups
/// itemized. `w` is the per-cell bias estimate, row-major (b1, r).
VarianceReport total_debiased_variance(const OutputTensor& tensor, std::span<const double> w);

} // namespace roa
