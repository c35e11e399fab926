#include "roa/fib.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "roa/stats.hpp"

namespace roa {

void FibCell::validate() const {
    if (y_2star.empty() || y_2star.size() != y_3star.size())
        throw std::invalid_argument("FibCell: y_2star/y_3star must be same non-zero length");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(y_star) || !finite(y_cv_extra))
        throw std::invalid_argument("FibCell: non-finite output");
    for (std::size_t i = 0; i < y_2star.size(); ++i)
        if (!finite(y_2star[i]) || !finite(y_3star[i]))
            throw std::invalid_argument("FibCell: non-finite inner output");
}

double delta_star(const FibCell& cell) {
    cell.validate();
    return mean(cell.y_2star) - cell.y_star;
}

double gamma_hat(const FibCell& cell) {
    cell.validate();
    return mean(cell.y_3star) - 2.0 * mean(cell.y_2star) + cell.y_star;
}

double w_hat(const FibCell& cell) { return delta_star(cell) + gamma_hat(cell); }

double debias_output(const FibCell& cell) {
    cell.validate();
    return cell.y_star + mean(cell.y_2star) - mean(cell.y_3star);
}

TTestResult t_test(const FibCell& cell, double alpha, double w0) {
    cell.validate();
    const std::size_t b2 = cell.b2_count();
    TTestResult res;
    const double w = w_hat(cell);
    if (b2 < 2) {
        res.t_stat = 0.0;
        res.significant = false;
        res.ci_lo = -std::numeric_limits<double>::infinity();
        res.ci_hi = std::numeric_limits<double>::infinity();
        return res;
    }
    std::vector<double> terms(b2);
    for (std::size_t i = 0; i < b2; ++i) terms[i] = cell.y_3star[i] - cell.y_2star[i];
    const double sd = sample_sd(terms);
    const double se = sd / std::sqrt(static_cast<double>(b2));
    if (se == 0.0) {
        const bool nonzero = (w - w0) != 0.0;
        res.t_stat = nonzero ? std::copysign(std::numeric_limits<double>::infinity(), w - w0) : 0.0;
        res.significant = nonzero;
        res.ci_lo = res.ci_hi = w;
        return res;
    }
    const double tcrit = student_t_quantile(1.0 - alpha / 2.0, static_cast<double>(b2 - 1));
    res.t_stat = (w - w0) / se;
    res.ci_lo = w - tcrit * se;
    res.ci_hi = w + tcrit * se;
    res.significant = (w0 < res.ci_lo) || (w0 > res.ci_hi);
    return res;
}

double cv_coefficient(std::span<const double> w_hats, std::span<const double> controls) {
    if (w_hats.size() != controls.size())
        throw std::invalid_argument("cv_coefficient: size mismatch");
    if (w_hats.size() < 2) throw std::invalid_argument("cv_coefficient: need R >= 2");
    const double var_c = sample_variance(controls);
    if (var_c <= 0.0) return 0.0;
    return sample_covariance(w_hats, controls) / var_c;
}

double control_value(const FibCell& cell) { return cell.y_cv_extra - cell.y_star; }

double w_hat_cv(const FibCell& cell, double c1) {
    return w_hat(cell) - c1 * control_value(cell);
}

} // namespace roa
