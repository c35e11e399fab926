#include "roa/hoif.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roa/stats.hpp"

namespace roa {

ScoreConstants make_score_constants(long m, long n) {
    if (m < 1 || n < 2) throw std::invalid_argument("make_score_constants: need m >= 1, n >= 2");
    ScoreConstants k;
    k.m = m;
    k.n = n;
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    k.cov_nn = -1.0 / (md * nd * nd);
    k.var_n = (nd - 1.0) / (md * nd * nd);
    k.lambda = -1.0 / (5.0 * k.cov_nn); // = m n^2 / 5
    k.eta = 6.0 * k.cov_nn + 4.0 / (nd * nd * nd);
    k.c2_star = -0.2 * (nd - 1.0 / md + 2.0 / (md * nd) + 1.0);
    return k;
}

std::string to_string(BetaMode mode) {
    return mode == BetaMode::eq21 ? "eq21" : "eq22-literal";
}

namespace {

inline double deviation(const ResampleCounts& c, std::size_t i) {
    return static_cast<double>(c.counts[i]) / static_cast<double>(c.m) -
           1.0 / static_cast<double>(c.counts.size());
}

std::vector<double> b1_mean_yd(const OutputTensor& t, std::span<const double> yd) {
    if (yd.size() != t.cell_count())
        throw std::invalid_argument("hoif: yd shape mismatch");
    std::vector<double> out(t.b1_count());
    for (std::size_t b = 0; b < t.b1_count(); ++b) {
        double s = 0.0;
        for (std::size_t r = 0; r < t.r_count(); ++r) s += yd[b * t.r_count() + r];
        out[b] = s / static_cast<double>(t.r_count());
    }
    return out;
}

} // namespace

double score1(const ResampleCounts& counts, std::size_t i) {
    counts.validate();
    const double md = static_cast<double>(counts.m);
    const double nd = static_cast<double>(counts.counts.size());
    return md * nd * deviation(counts, i);
}

double score2(const ResampleCounts& counts, std::size_t i, std::size_t j,
              const ScoreConstants& k) {
    if (i == j) throw std::invalid_argument("score2: diagonal pair (i == j) excluded");
    counts.validate();
    return k.lambda * deviation(counts, i) * deviation(counts, j);
}

double if1_hat(const OutputTensor& t, std::span<const double> yd, std::size_t i) {
    const auto ydbar = b1_mean_yd(t, yd);
    if (t.counts().size() != t.b1_count())
        throw std::invalid_argument("if1_hat: tensor is missing per-b1 counts");
    double s = 0.0;
    for (std::size_t b = 0; b < t.b1_count(); ++b)
        s += ydbar[b] * score1(t.counts()[b], i);
    return s / static_cast<double>(t.b1_count());
}

double if2_hat(const OutputTensor& t, std::span<const double> yd, double baseline_mean,
               std::size_t i, std::size_t j, const ScoreConstants& k) {
    if (i == j) throw std::invalid_argument("if2_hat: diagonal pair (i == j) excluded");
    if (!std::isfinite(baseline_mean))
        throw std::invalid_argument("if2_hat: baseline run unavailable");
    const auto ydbar = b1_mean_yd(t, yd);
    double s = 0.0;
    for (std::size_t b = 0; b < t.b1_count(); ++b)
        s += ydbar[b] * score2(t.counts()[b], i, j, k);
    s /= static_cast<double>(t.b1_count());
    const double md = static_cast<double>(k.m);
    const double nd = static_cast<double>(k.n);
    return s + k.lambda * baseline_mean / (md * nd * nd) - k.lambda * k.eta * if1_hat(t, yd, i);
}

double beta_hat(const OutputTensor& t, std::span<const double> yd, const ScoreConstants& k,
                BetaMode mode, double* pair_sum_out) {
    if (t.b1_count() < 2) throw std::invalid_argument("beta_hat: need B1 >= 2");
    const auto ydbar = b1_mean_yd(t, yd);
    const std::size_t B1 = t.b1_count();
    const std::size_t n = t.counts().front().counts.size();

    const double abar = mean(ydbar);

    // Sum over distinct pairs of Cov_b1(mean_r Y^d, d_i^2 d_j^2). The pair sum
    // per b1 collapses to (sum_i d_i^2)^2 - sum_i d_i^4; accumulated blockwise
    // in long double because the covariance cancellation is severe.
    std::vector<long double> pair_stat(B1);
    constexpr std::size_t kBlock = 64;
    for (std::size_t b = 0; b < B1; ++b) {
        const ResampleCounts& c = t.counts()[b];
        long double sum_sq = 0.0L, sum_quad = 0.0L;
        for (std::size_t i0 = 0; i0 < n; i0 += kBlock) {
            long double blk_sq = 0.0L, blk_quad = 0.0L;
            const std::size_t hi = std::min(n, i0 + kBlock);
            for (std::size_t i = i0; i < hi; ++i) {
                const long double d = deviation(c, i);
                const long double d2 = d * d;
                blk_sq += d2;
                blk_quad += d2 * d2;
            }
            sum_sq += blk_sq;
            sum_quad += blk_quad;
        }
        pair_stat[b] = sum_sq * sum_sq - sum_quad;
    }

    long double cov = 0.0L;
    long double pbar = 0.0L;
    for (std::size_t b = 0; b < B1; ++b) pbar += pair_stat[b];
    pbar /= static_cast<long double>(B1);
    for (std::size_t b = 0; b < B1; ++b)
        cov += (static_cast<long double>(ydbar[b]) - abar) * (pair_stat[b] - pbar);
    cov /= static_cast<long double>(B1 - 1);

    if (pair_sum_out) *pair_sum_out = static_cast<double>(cov);

    const double prefactor =
        (mode == BetaMode::eq21) ? k.lambda / 2.0 : -1.2 * k.cov_nn;
    return prefactor * static_cast<double>(cov);
}

HoifDiagnostics hoif_diagnostics(const OutputTensor& t, std::span<const double> yd,
                                 const ScoreConstants& k, BetaMode mode) {
    HoifDiagnostics d;
    d.mode = mode;
    d.lambda = k.lambda;
    d.eta = k.eta;
    d.c2_star = k.c2_star;
    const std::size_t n = t.counts().front().counts.size();
    d.if1.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.if1[i] = if1_hat(t, yd, i);
    d.beta_hat = beta_hat(t, yd, k, mode, &d.pair_sum);
    return d;
}

} // namespace roa
