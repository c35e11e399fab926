#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "roa/tensor.hpp"

namespace roa {

/// Closed-form multinomial moment constants for the m-out-of-n score
/// functions. cov_nn = Cov(N_i/m, N_j/m) for i != j.
struct ScoreConstants {
    long m = 0;
    long n = 0;
    double cov_nn = 0.0;  // -1 / (m n^2)
    double var_n = 0.0;   // (n-1) / (m n^2)
    double lambda = 0.0;  // -1 / (5 cov_nn) = m n^2 / 5
    double eta = 0.0;     // 6 cov_nn + 4 / n^3
    double c2_star = 0.0; // -0.2 (n - 1/m + 2/(mn) + 1)
};

ScoreConstants make_score_constants(long m, long n);

/// Prefactor convention for the bias estimator. The lambda/2 weighting and
/// the literal -1.2 Cov prefactor differ by orders of magnitude; both are
/// implemented, eq21 is the default, neither is silently "fixed".
enum class BetaMode { eq21, eq22_literal };

std::string to_string(BetaMode mode);

struct HoifDiagnostics {
    std::vector<double> if1; // length n
    double beta_hat = 0.0;
    BetaMode mode = BetaMode::eq21;
    double lambda = 0.0;
    double eta = 0.0;
    double c2_star = 0.0;
    double pair_sum = 0.0; // covariance-sum audit trail (before the prefactor)
};

/// First-order score S1_i = m n (N_i/m - 1/n). Sums to zero over i for any
/// valid counts.
double score1(const ResampleCounts& counts, std::size_t i);

/// Second-order score S2_ij = lambda (N_i/m - 1/n)(N_j/m - 1/n), i != j only.
double score2(const ResampleCounts& counts, std::size_t i, std::size_t j,
              const ScoreConstants& k);

/// First-order influence estimate at point i: average over (b1, r) of
/// Y^d_r(F*_{b1}) S1_i(F*_{b1}). `yd` is row-major (b1, r).
double if1_hat(const OutputTensor& tensor, std::span<const double> yd, std::size_t i);

/// Second-order influence estimate for the distinct pair (i, j).
/// `baseline_mean` is the average output at the un-resampled distribution.
double if2_hat(const OutputTensor& tensor, std::span<const double> yd, double baseline_mean,
               std::size_t i, std::size_t j, const ScoreConstants& k);

/// Scalar bias estimate: prefactor times the sum over distinct pairs of the
/// across-b1 sample covariance between the per-b1 mean debiased output and
/// (N_i/m - 1/n)^2 (N_j/m - 1/n)^2. Needs B1 >= 2.
double beta_hat(const OutputTensor& tensor, std::span<const double> yd, const ScoreConstants& k,
                BetaMode mode, double* pair_sum_out = nullptr);

/// Full diagnostics bundle (IF1 vector, beta, constants).
HoifDiagnostics hoif_diagnostics(const OutputTensor& tensor, std::span<const double> yd,
                                 const ScoreConstants& k, BetaMode mode);

} // namespace roa
