#pragma once

#include <span>
#include <string>
#include <vector>

#include "roa/hoif.hpp"
#include "roa/tensor.hpp"
#include "roa/variance.hpp"

namespace roa {

struct ConfidenceInterval {
    std::string method;
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double alpha = 0.05;
    long dof = 0;

    double half_width() const { return (hi - lo) / 2.0; }
    bool covers(double truth) const { return lo <= truth && truth <= hi; }
};

/// Crude t-interval over R replications at one input model:
/// mean +/- t_{R-1,1-alpha/2} s / sqrt(R).
ConfidenceInterval crude_ci(std::span<const double> outputs, double alpha);

/// IU-inflated interval: grand mean +/- t_{B1-1} sqrt(iu_var + sigma2_u / R),
/// with the ANOVA IU variance floored at zero.
ConfidenceInterval barton_ci(const OutputTensor& tensor, double alpha);

/// Influence-function IU variance: grand mean +/- z sqrt((1/n^2) sum IF1^2
/// + sigma2_u / (B1 R)).
ConfidenceInterval lamqian_ci(const OutputTensor& tensor, std::span<const double> if1,
                              double alpha);

/// Debiased interval: center = mean of debiased outputs minus beta_hat,
/// half-width t_{B1R-1} sqrt(total_variance / (B1R - 1)).
ConfidenceInterval bias_corrected_ci(std::span<const double> yd, double beta,
                                     const VarianceReport& var, std::size_t b1_count,
                                     std::size_t r_count, double alpha,
                                     const std::string& method = "bias-corrected");

} // namespace roa
