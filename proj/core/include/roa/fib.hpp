#pragma once

#include <span>
#include <vector>

namespace roa {

/// One (b1, r) cell of the output tensor: the star output, the two inner
/// bootstrap levels, and the shared per-b1 control-variate extra run.
struct FibCell {
    double y_star = 0.0;
    std::vector<double> y_2star; // length B2
    std::vector<double> y_3star; // length B2
    double y_cv_extra = 0.0;     // Y_{R+1}(F*_{b1}), shared across r for one b1

    std::size_t b2_count() const { return y_2star.size(); }
    void validate() const;
};

struct TTestResult {
    double t_stat = 0.0;
    bool significant = false;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// Per-cell fast-iterated-bootstrap results. w_hat = delta_star + gamma_hat
/// holds to machine precision by construction.
struct FibResult {
    double delta_star = 0.0;
    double gamma_hat = 0.0;
    double w_hat = 0.0;
    double t_stat = 0.0;
    bool significant = false;
    double w_hat_cv = 0.0;
    double c1_hat = 0.0; // per-b1 coefficient used for w_hat_cv
    double control = 0.0;
};

/// Bootstrap bias estimate: mean(y_2star) - y_star.
double delta_star(const FibCell& cell);

/// Residual second-level bias: mean(y_3star) - 2 mean(y_2star) + y_star.
double gamma_hat(const FibCell& cell);

/// Total per-output bias W = delta + gamma = mean(y_3star) - mean(y_2star).
double w_hat(const FibCell& cell);

/// Fast-iterated-bootstrap corrected output: y_star + mean(y_2star) - mean(y_3star).
double debias_output(const FibCell& cell);

/// Significance of W against w0 from the per-b2 terms (y_3star[b2] - y_2star[b2]).
/// The pivot is (W - w0) / (S / sqrt(B2)) against t_{B2-1}; with fewer than two
/// inner resamples the test is unavailable and reports not-significant.
TTestResult t_test(const FibCell& cell, double alpha, double w0 = 0.0);

/// Least-squares slope cov(w, c)/var(c); zero control variance disables the
/// control variate and returns 0.
double cv_coefficient(std::span<const double> w_hats, std::span<const double> controls);

/// Control variate for the cell: C = y_cv_extra - y_star.
double control_value(const FibCell& cell);

/// Variance-reduced bias estimate W - c1 * C. The regression-residual sign is
/// used so that c1 = cv_coefficient() always reduces sample variance.
double w_hat_cv(const FibCell& cell, double c1);

} // namespace roa
