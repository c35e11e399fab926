#include <doctest.h>

#include <cmath>

#include "roa/engine.hpp"
#include "roa/hoif.hpp"
#include "roa/model.hpp"
#include "roa/stats.hpp"

using namespace roa;

TEST_CASE("score constants closed forms") {
    const ScoreConstants k = make_score_constants(10, 100);
    CHECK(k.cov_nn == doctest::Approx(-1.0 / 100000.0));
    CHECK(k.var_n == doctest::Approx(99.0 / 100000.0));
    CHECK(k.lambda == doctest::Approx(10.0 * 10000.0 / 5.0));
    CHECK(k.eta == doctest::Approx(6.0 * -1e-5 + 4.0 / 1e6));
    CHECK(k.c2_star == doctest::Approx(-20.1804));
}

TEST_CASE("c2* limit for large m") {
    const ScoreConstants k = make_score_constants(1000000000000L, 100);
    CHECK(k.c2_star == doctest::Approx(-0.2 * 101.0).epsilon(1e-9));
}

TEST_CASE("first-order score hand values") {
    const Dataset d = Dataset::from_values({1, 2, 3, 4});
    ResampleCounts c(std::vector<long>{2, 2, 0, 0}, d);
    CHECK(score1(c, 0) == doctest::Approx(4.0 * 4.0 * (0.5 - 0.25)));
    CHECK(score1(c, 2) == doctest::Approx(4.0 * 4.0 * (0.0 - 0.25)));
    // balanced counts give zero score
    ResampleCounts b(std::vector<long>{1, 1, 1, 1}, d);
    for (std::size_t i = 0; i < 4; ++i) CHECK(score1(b, i) == doctest::Approx(0.0));
}

TEST_CASE("scores sum to zero over the support") {
    const Dataset d = Dataset::from_values({1, 2, 3, 4, 5, 6});
    for (std::uint64_t s = 0; s < 100; ++s) {
        const ResampleCounts c = draw_counts(d, 4, s);
        double total = 0.0;
        for (std::size_t i = 0; i < 6; ++i) total += score1(c, i);
        CHECK(std::fabs(total) < 1e-9);
    }
}

TEST_CASE("second-order score hand value and diagonal rejection") {
    const Dataset d = Dataset::from_values({1, 2, 3, 4});
    ResampleCounts c(std::vector<long>{2, 2, 0, 0}, d);
    const ScoreConstants k = make_score_constants(4, 4);
    CHECK(k.lambda == doctest::Approx(12.8));
    CHECK(score2(c, 0, 2, k) == doctest::Approx(12.8 * 0.25 * -0.25));
    CHECK(score2(c, 2, 3, k) == doctest::Approx(12.8 * 0.0625));
    CHECK_THROWS(score2(c, 1, 1, k));
}

TEST_CASE("multinomial moment identities backing the constants") {
    // E[N_i/m] = 1/n, Var = (n-1)/(m n^2), Cov = -1/(m n^2) at n = m = 5
    const Dataset d = Dataset::from_values({1, 2, 3, 4, 5});
    const int reps = 1000000;
    double s0 = 0.0, s00 = 0.0, s01 = 0.0;
    for (int r = 0; r < reps; ++r) {
        const ResampleCounts c = draw_counts(d, 5, 100 + r);
        const double f0 = static_cast<double>(c.counts[0]) / 5.0;
        const double f1 = static_cast<double>(c.counts[1]) / 5.0;
        s0 += f0;
        s00 += f0 * f0;
        s01 += f0 * f1;
    }
    const double mean_f = s0 / reps;
    const double var_f = s00 / reps - mean_f * mean_f;
    const double cov_f = s01 / reps - mean_f * mean_f;
    CHECK(mean_f == doctest::Approx(0.2).epsilon(0.01));
    CHECK(var_f == doctest::Approx(4.0 / 125.0).epsilon(0.01));
    CHECK(cov_f == doctest::Approx(-1.0 / 125.0).epsilon(0.01));
}

namespace {

// tiny hand-filled tensor: outputs y, counts per b1
OutputTensor make_tensor(const Dataset& base, std::vector<ResampleCounts> counts,
                         std::vector<std::vector<double>> y) {
    const std::size_t b1 = y.size();
    const std::size_t r = y.front().size();
    OutputTensor t(b1, r, 1);
    for (std::size_t b = 0; b < b1; ++b)
        for (std::size_t i = 0; i < r; ++i) {
            t.y_star(b, i) = y[b][i];
            t.y_2star(b, i, 0) = y[b][i];
            t.y_3star(b, i, 0) = y[b][i];
        }
    t.counts() = std::move(counts);
    (void)base;
    return t;
}

} // namespace

TEST_CASE("if1 on a single-cell tensor is exactly Y * S1") {
    const Dataset d = Dataset::from_values({1, 2, 3});
    ResampleCounts c(std::vector<long>{2, 1, 0}, d);
    OutputTensor t = make_tensor(d, {c}, {{5.0}});
    const std::vector<double> yd = {5.0};
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(if1_hat(t, yd, i) == doctest::Approx(5.0 * score1(c, i)));
}

TEST_CASE("if1 of constant outputs is near zero") {
    const Dataset d = Dataset::from_values({0, 1, 2, 3, 4, 5, 6, 7});
    const auto model = make_constant_model(3.0);
    AllocationOverrides ov;
    ov.b1 = 4000;
    ov.r = 2;
    ov.b2 = 1;
    ov.m = 8;
    const BudgetAllocation alloc = allocate(40000, 8, ov);
    AnalysisOptions opt;
    opt.engine.threads = 2;
    const AnalysisResult res = analyze_nested(*model, d, alloc, {}, 31, opt);
    // scores are mean zero, so IF1 is an average of c * S1 terms; S1 has
    // standard deviation about 7.5 here, so 4 SE is about 1.4
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::fabs(res.hoif.if1[i]) < 1.5);
    // exact zero beta for constant outputs (zero covariance)
    CHECK(res.hoif.beta_hat == doctest::Approx(0.0));
}

TEST_CASE("if1 recovers the influence function of the mean") {
    // MeanModel: E[IF1(D_i)] = D_i - mean(D); n = 10, B1 = 2000 here (the
    // acceptance suite runs the full-scale 5000)
    const Dataset d = Dataset::from_values({0.2, 1.1, 2.7, 3.4, 4.9, 5.5, 6.1, 7.8, 8.9, 9.3});
    const auto model = make_mean_model(8, 1);
    AllocationOverrides ov;
    ov.b1 = 2000;
    ov.r = 2;
    ov.b2 = 1;
    ov.m = 10;
    const BudgetAllocation alloc = allocate(20000, 10, ov);
    AnalysisOptions opt;
    opt.engine.threads = 2;
    const AnalysisResult res = analyze_nested(*model, d, alloc, {}, 77, opt);

    double dbar = 0.0;
    for (std::size_t i = 0; i < 10; ++i) dbar += d.value(i) / 10.0;
    const OutputTensor& t = res.run.tensor;
    for (std::size_t i = 0; i < 10; ++i) {
        // per-point standard error from the spread of the per-b1 terms
        std::vector<double> terms(t.b1_count());
        for (std::size_t b = 0; b < t.b1_count(); ++b) {
            double ydbar = 0.0;
            for (std::size_t r = 0; r < t.r_count(); ++r) ydbar += res.yd[b * t.r_count() + r];
            ydbar /= static_cast<double>(t.r_count());
            terms[b] = ydbar * score1(t.counts()[b], i);
        }
        const double se = sample_sd(terms) / std::sqrt(static_cast<double>(t.b1_count()));
        CHECK(std::fabs(res.hoif.if1[i] - (d.value(i) - dbar)) < 4.0 * se);
    }
}

TEST_CASE("beta_hat matches brute-force pair covariance sum") {
    const Dataset d = Dataset::from_values({1, 2, 3, 4, 5});
    Rng rng(12);
    const std::size_t B1 = 12, R = 2;
    std::vector<ResampleCounts> counts;
    std::vector<std::vector<double>> y(B1, std::vector<double>(R));
    for (std::size_t b = 0; b < B1; ++b) {
        counts.push_back(draw_counts(d, 4, 100 + b));
        for (std::size_t r = 0; r < R; ++r) y[b][r] = rng.next_normal() * 2.0 + 1.0;
    }
    OutputTensor t = make_tensor(d, counts, y);
    std::vector<double> yd;
    for (const auto& row : y)
        for (double v : row) yd.push_back(v);

    const ScoreConstants k = make_score_constants(4, 5);

    // brute force: per-pair sample covariance across b1, then summed
    std::vector<double> a(B1);
    for (std::size_t b = 0; b < B1; ++b) a[b] = (y[b][0] + y[b][1]) / 2.0;
    double pair_sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            if (i == j) continue;
            std::vector<double> q(B1);
            for (std::size_t b = 0; b < B1; ++b) {
                const double di = static_cast<double>(counts[b].counts[i]) / 4.0 - 0.2;
                const double dj = static_cast<double>(counts[b].counts[j]) / 4.0 - 0.2;
                q[b] = di * di * dj * dj;
            }
            pair_sum += sample_covariance(a, q);
        }

    for (BetaMode mode : {BetaMode::eq21, BetaMode::eq22_literal}) {
        const double prefactor = mode == BetaMode::eq21 ? k.lambda / 2.0 : -1.2 * k.cov_nn;
        const double expected = prefactor * pair_sum;
        const double got = beta_hat(t, yd, k, mode);
        CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("if2 needs a finite baseline and distinct points") {
    const Dataset d = Dataset::from_values({1, 2, 3});
    ResampleCounts c(std::vector<long>{1, 1, 1}, d);
    OutputTensor t = make_tensor(d, {c, c}, {{1.0}, {2.0}});
    const std::vector<double> yd = {1.0, 2.0};
    const ScoreConstants k = make_score_constants(3, 3);
    CHECK_THROWS(if2_hat(t, yd, std::nan(""), 0, 1, k));
    CHECK_THROWS(if2_hat(t, yd, 1.0, 1, 1, k));
    CHECK(std::isfinite(if2_hat(t, yd, 1.5, 0, 1, k)));
}

TEST_CASE("if2 of a linear functional is near zero") {
    // MeanModel power=1: theta is linear in F, so the second derivative
    // vanishes; the if2 average over pairs should be near zero
    const Dataset d = Dataset::from_values({1, 2, 3, 4, 5, 6});
    const auto model = make_mean_model(16, 1);
    AllocationOverrides ov;
    ov.b1 = 3000;
    ov.r = 2;
    ov.b2 = 1;
    ov.m = 6;
    const BudgetAllocation alloc = allocate(30000, 6, ov);
    AnalysisOptions opt;
    opt.engine.threads = 2;
    const AnalysisResult res = analyze_nested(*model, d, alloc, {}, 5150, opt);

    const ScoreConstants k = make_score_constants(6, 6);
    double sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            if (i == j) continue;
            sum += if2_hat(res.run.tensor, res.yd, res.baseline_mean, i, j, k);
            ++pairs;
        }
    CHECK(std::fabs(sum / pairs) < 2.0);
}

TEST_CASE("constant-model covariance of the IF terms matches the exact moments") {
    // Cov_*(IF2-term, IF1-term) for constant outputs. With Ybar^2 factored
    // out this is lambda m n E[d_i^2 d_j] - lambda eta Var(S1), where the
    // multinomial moments are E[(N_i - mp)^2 (N_j - mp)] = m p^2 (2p - 1)
    // and Var(S1) = (mn)^2 (n-1)/(m n^2). The asymptotic closed form quoted
    // for these constants is only order-accurate at this scale; the exact
    // moments are the testable statement.
    const long n = 5, m = 5;
    const ScoreConstants k = make_score_constants(m, n);
    const Dataset d = Dataset::from_values({1, 2, 3, 4, 5});
    const double ybar = 2.0;

    const int reps = 1000000;
    double su = 0.0, sv = 0.0, suv = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const ResampleCounts c = draw_counts(d, m, 40000 + rep);
        const double s2 = score2(c, 0, 1, k);
        const double s1 = score1(c, 0);
        const double u = ybar * s2 + k.lambda * ybar / (static_cast<double>(m) * n * n) -
                         k.lambda * k.eta * ybar * s1;
        const double v = ybar * s1;
        su += u;
        sv += v;
        suv += u * v;
    }
    const double cov = suv / reps - (su / reps) * (sv / reps);

    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double p = 1.0 / nd;
    const double third_moment = md * p * p * (2.0 * p - 1.0) / (md * md * md); // E[d_i^2 d_j]
    const double var_s1 = md * md * nd * nd * (nd - 1.0) / (md * nd * nd);
    const double exact =
        ybar * ybar * (k.lambda * md * nd * third_moment - k.lambda * k.eta * var_s1);
    CHECK(cov == doctest::Approx(exact).epsilon(0.05));
}
