#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace roa {

double mean(std::span<const double> v);

/// Unbiased sample variance (divisor n-1).
double sample_variance(std::span<const double> v);

/// Population variance (divisor n) — the variance of the empirical distribution.
double population_variance(std::span<const double> v);

double sample_sd(std::span<const double> v);

/// Sample covariance (divisor n-1) of paired observations.
double sample_covariance(std::span<const double> x, std::span<const double> y);

/// Student-t critical value t_{dof, p} (p-quantile, e.g. p = 1 - alpha/2).
double student_t_quantile(double p, double dof);

/// Standard normal quantile.
double normal_quantile(double p);

} // namespace roa
