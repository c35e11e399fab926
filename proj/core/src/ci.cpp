#include "roa/ci.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roa/stats.hpp"

namespace roa {

ConfidenceInterval crude_ci(std::span<const double> outputs, double alpha) {
    if (outputs.size() < 2) throw std::invalid_argument("crude_ci: need R >= 2");
    const double R = static_cast<double>(outputs.size());
    const double mu = mean(outputs);
    const double se = std::sqrt(sample_variance(outputs) / R);
    const double t = student_t_quantile(1.0 - alpha / 2.0, R - 1.0);
    ConfidenceInterval ci;
    ci.method = "crude";
    ci.point = mu;
    ci.lo = mu - t * se;
    ci.hi = mu + t * se;
    ci.alpha = alpha;
    ci.dof = static_cast<long>(outputs.size()) - 1;
    return ci;
}

ConfidenceInterval barton_ci(const OutputTensor& tensor, double alpha) {
    if (tensor.b1_count() < 2 || tensor.r_count() < 2)
        throw std::invalid_argument("barton_ci: need B1 >= 2 and R >= 2");
    const auto y = tensor.star_matrix();
    const double mu = mean(y);
    const double iu = std::max(0.0, iu_variance(tensor));
    const double sig2 = pooled_simulation_variance(tensor);
    const double R = static_cast<double>(tensor.r_count());
    const double hw = student_t_quantile(1.0 - alpha / 2.0,
                                         static_cast<double>(tensor.b1_count()) - 1.0) *
                      std::sqrt(iu + sig2 / R);
    ConfidenceInterval ci;
    ci.method = "iu-barton";
    ci.point = mu;
    ci.lo = mu - hw;
    ci.hi = mu + hw;
    ci.alpha = alpha;
    ci.dof = static_cast<long>(tensor.b1_count()) - 1;
    return ci;
}

ConfidenceInterval lamqian_ci(const OutputTensor& tensor, std::span<const double> if1,
                              double alpha) {
    const auto y = tensor.star_matrix();
    const double mu = mean(y);
    double iu = 0.0;
    for (double v : if1) iu += v * v;
    const double n = static_cast<double>(if1.size());
    iu /= n * n;
    double sig2 = 0.0;
    if (tensor.r_count() >= 2) sig2 = pooled_simulation_variance(tensor);
    const double BR = static_cast<double>(tensor.cell_count());
    const double hw = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(iu + sig2 / BR);
    ConfidenceInterval ci;
    ci.method = "iu-lamqian";
    ci.point = mu;
    ci.lo = mu - hw;
    ci.hi = mu + hw;
    ci.alpha = alpha;
    ci.dof = 0; // normal critical value
    return ci;
}

ConfidenceInterval bias_corrected_ci(std::span<const double> yd, double beta,
                                     const VarianceReport& var, std::size_t b1_count,
                                     std::size_t r_count, double alpha,
                                     const std::string& method) {
    if (b1_count < 2 || r_count < 1)
        throw std::invalid_argument("bias_corrected_ci: need B1 >= 2");
    const double BR = static_cast<double>(b1_count * r_count);
    const double center = mean(yd) - beta;
    // the total variance estimates the dispersion of a per-b1 mean (its IU
    // and bias groups do not average out over r), so the grand mean over B1
    // independent resamples carries total / B1; dof kept at B1 R - 1
    const double hw = student_t_quantile(1.0 - alpha / 2.0, BR - 1.0) *
                      std::sqrt(std::max(0.0, var.total_debiased) /
                                static_cast<double>(b1_count));
    ConfidenceInterval ci;
    ci.method = method;
    ci.point = center;
    ci.lo = center - hw;
    ci.hi = center + hw;
    ci.alpha = alpha;
    ci.dof = static_cast<long>(BR) - 1;
    return ci;
}

} // namespace roa
