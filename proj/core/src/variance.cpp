#include "roa/variance.hpp"

#include <algorithm>
#include <stdexcept>

#include "roa/stats.hpp"

namespace roa {

namespace {

void require_shape(const OutputTensor& t, std::size_t min_b1, std::size_t min_r) {
    if (t.b1_count() < min_b1 || t.r_count() < min_r)
        throw std::invalid_argument("variance: insufficient replication structure");
}

std::vector<double> b1_means(const OutputTensor& t) {
    std::vector<double> out(t.b1_count());
    for (std::size_t b = 0; b < t.b1_count(); ++b) {
        double s = 0.0;
        for (std::size_t r = 0; r < t.r_count(); ++r) s += t.y_star(b, r);
        out[b] = s / static_cast<double>(t.r_count());
    }
    return out;
}

} // namespace

double iu_variance(const OutputTensor& t) {
    require_shape(t, 2, 2);
    const auto ybar = b1_means(t);
    const double grand = mean(ybar);
    const double B1 = static_cast<double>(t.b1_count());
    const double R = static_cast<double>(t.r_count());

    double between = 0.0;
    for (double v : ybar) between += (v - grand) * (v - grand);
    between /= (B1 - 1.0);

    double within = 0.0;
    for (std::size_t b = 0; b < t.b1_count(); ++b)
        for (std::size_t r = 0; r < t.r_count(); ++r) {
            const double d = t.y_star(b, r) - ybar[b];
            within += d * d;
        }
    within *= 1.0 / R * 1.0 / (B1 * (R - 1.0));

    return between - within;
}

double pooled_simulation_variance(const OutputTensor& t) {
    require_shape(t, 1, 2);
    const auto ybar = b1_means(t);
    double ss = 0.0;
    for (std::size_t b = 0; b < t.b1_count(); ++b)
        for (std::size_t r = 0; r < t.r_count(); ++r) {
            const double d = t.y_star(b, r) - ybar[b];
            ss += d * d;
        }
    const double B1 = static_cast<double>(t.b1_count());
    const double R = static_cast<double>(t.r_count());
    return ss / (B1 * (R - 1.0));
}

double crude_variance(std::span<const double> outputs) {
    return sample_variance(outputs);
}

VarianceReport total_debiased_variance(const OutputTensor& t, std::span<const double> w) {
    require_shape(t, 2, 2);
    if (w.size() != t.cell_count())
        throw std::invalid_argument("total_debiased_variance: W shape mismatch");

    const double B1 = static_cast<double>(t.b1_count());
    const double R = static_cast<double>(t.r_count());
    const double BR = B1 * R;

    const auto ybar_b1 = b1_means(t);
    const double ybar = mean(ybar_b1);

    // grand mean of W: mean over b1 of per-b1 means (balanced, so equal to
    // the flat mean)
    double wbar = 0.0;
    for (std::size_t b = 0; b < t.b1_count(); ++b) {
        double s = 0.0;
        for (std::size_t r = 0; r < t.r_count(); ++r) s += w[b * t.r_count() + r];
        wbar += s / R;
    }
    wbar /= B1;

    double ss_y = 0.0, ss_w = 0.0, ss_wy = 0.0, ss_within = 0.0;
    for (std::size_t b = 0; b < t.b1_count(); ++b)
        for (std::size_t r = 0; r < t.r_count(); ++r) {
            const double dy = t.y_star(b, r) - ybar;
            const double dw = w[b * t.r_count() + r] - wbar;
            const double dwithin = t.y_star(b, r) - ybar_b1[b];
            ss_y += dy * dy;
            ss_w += dw * dw;
            ss_wy += dw * dy;
            ss_within += dwithin * dwithin;
        }
    double ss_between = 0.0;
    for (double v : ybar_b1) ss_between += (v - ybar) * (v - ybar);

    VarianceReport rep;
    rep.y_var_group = ss_y / (R * (BR - 1.0));
    rep.bias_var = ss_w / (B1 * R * (BR - 1.0));
    rep.bias_cov = -2.0 * (R - 1.0) / (B1 * R * R * (BR - 1.0)) * ss_wy;
    rep.between_group = ss_between / (B1 - 1.0);
    rep.within_group = -(1.0 / R) * (1.0 / (B1 * (R - 1.0))) * ss_within;
    rep.iu_var_raw = rep.between_group + rep.within_group;
    rep.iu_var = std::max(0.0, rep.iu_var_raw);
    rep.sigma2_u = pooled_simulation_variance(t);
    rep.total_debiased =
        rep.y_var_group + rep.bias_var + rep.bias_cov + rep.between_group + rep.within_group;
    return rep;
}

} // namespace roa
