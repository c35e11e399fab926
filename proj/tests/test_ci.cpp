#include <doctest.h>

#include <cmath>

#include "roa/ci.hpp"
#include "roa/rng.hpp"
#include "roa/stats.hpp"

using namespace roa;

namespace {

OutputTensor tensor_from(std::vector<std::vector<double>> y) {
    const std::size_t b1 = y.size(), r = y.front().size();
    OutputTensor t(b1, r, 1);
    for (std::size_t b = 0; b < b1; ++b)
        for (std::size_t i = 0; i < r; ++i) {
            t.y_star(b, i) = y[b][i];
            t.y_2star(b, i, 0) = y[b][i];
            t.y_3star(b, i, 0) = y[b][i];
        }
    return t;
}

} // namespace

TEST_CASE("crude interval of [1, 3]") {
    // mean 2, sample sd sqrt(2), standard error 1
    const ConfidenceInterval ci = crude_ci(std::vector<double>{1, 3}, 0.05);
    const double t = student_t_quantile(0.975, 1);
    CHECK(ci.point == doctest::Approx(2.0));
    CHECK(ci.lo == doctest::Approx(2.0 - t));
    CHECK(ci.hi == doctest::Approx(2.0 + t));
    CHECK(ci.dof == 1);
}

TEST_CASE("constant outputs give a zero-width crude interval") {
    const ConfidenceInterval ci = crude_ci(std::vector<double>{4, 4, 4}, 0.05);
    CHECK(ci.point == 4.0);
    CHECK(ci.half_width() == doctest::Approx(0.0));
}

TEST_CASE("crude t-interval calibration at 95%") {
    Rng rng(12);
    const int trials = 10000;
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> y(8);
        for (auto& v : y) v = 3.0 + rng.next_normal();
        if (crude_ci(y, 0.05).covers(3.0)) ++covered;
    }
    const double rate = static_cast<double>(covered) / trials;
    CHECK(rate > 0.94);
    CHECK(rate < 0.96);
}

TEST_CASE("barton interval widens with IU and collapses without it") {
    const OutputTensor no_iu = tensor_from({{1, 3}, {1, 3}, {1, 3}});
    const OutputTensor with_iu = tensor_from({{1, 3}, {11, 13}, {21, 23}});
    const ConfidenceInterval a = barton_ci(no_iu, 0.05);
    const ConfidenceInterval b = barton_ci(with_iu, 0.05);
    CHECK(a.half_width() < b.half_width());
    // iu_var > 0 makes the width strictly larger than the sigma2/R-only width
    const double sim_only = student_t_quantile(0.975, 2) *
                            std::sqrt(pooled_simulation_variance(with_iu) / 2.0);
    CHECK(b.half_width() > sim_only);
}

TEST_CASE("barton coverage on a hierarchical gaussian oracle") {
    // Y = mu_b1 + e_r; nominal 95%, requires >= 90% empirically
    Rng rng(77);
    const double a = 2.0, b = 1.0;
    int covered = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        OutputTensor ten(20, 4, 1);
        for (std::size_t b1 = 0; b1 < 20; ++b1) {
            const double mu = std::sqrt(a) * rng.next_normal();
            for (std::size_t r = 0; r < 4; ++r)
                ten.y_star(b1, r) = 5.0 + mu + std::sqrt(b) * rng.next_normal();
        }
        if (barton_ci(ten, 0.05).covers(5.0)) ++covered;
    }
    CHECK(static_cast<double>(covered) / trials >= 0.90);
}

TEST_CASE("lamqian reduces to a simulation-only width with zero IF1") {
    const OutputTensor t = tensor_from({{1, 2}, {3, 4}});
    const std::vector<double> if1(10, 0.0);
    const ConfidenceInterval ci = lamqian_ci(t, if1, 0.05);
    const double expected = normal_quantile(0.975) *
                            std::sqrt(pooled_simulation_variance(t) / 4.0);
    CHECK(ci.half_width() == doctest::Approx(expected));
}

TEST_CASE("lamqian width grows with the IF1 norm") {
    const OutputTensor t = tensor_from({{1, 2}, {3, 4}});
    std::vector<double> small(10, 0.5), big(10, 2.0);
    CHECK(lamqian_ci(t, small, 0.05).half_width() < lamqian_ci(t, big, 0.05).half_width());
}

TEST_CASE("bias-corrected center identity") {
    // center - grand mean == -(mean W + beta), via yd = y - w
    Rng rng(5);
    const std::size_t B1 = 6, R = 3;
    std::vector<std::vector<double>> y(B1, std::vector<double>(R));
    for (auto& row : y)
        for (auto& v : row) v = rng.next_normal() * 2.0 + 1.0;
    const OutputTensor t = tensor_from(y);
    std::vector<double> w(B1 * R), yd(B1 * R);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.next_normal() * 0.3;
    const auto flat = t.star_matrix();
    for (std::size_t i = 0; i < w.size(); ++i) yd[i] = flat[i] - w[i];
    const double beta = 0.37;
    const VarianceReport var = total_debiased_variance(t, w);
    const ConfidenceInterval ci = bias_corrected_ci(yd, beta, var, B1, R, 0.05);
    CHECK(ci.point - mean(flat) == doctest::Approx(-(mean(w) + beta)).epsilon(1e-12));
}

TEST_CASE("alpha monotonicity for every interval type") {
    Rng rng(42);
    std::vector<std::vector<double>> y(5, std::vector<double>(4));
    for (auto& row : y)
        for (auto& v : row) v = rng.next_normal() * 3.0;
    const OutputTensor t = tensor_from(y);
    std::vector<double> w(20);
    for (auto& v : w) v = rng.next_normal() * 0.2;
    std::vector<double> yd = t.star_matrix();
    for (std::size_t i = 0; i < w.size(); ++i) yd[i] -= w[i];
    const std::vector<double> if1(10, 0.7);
    const VarianceReport var = total_debiased_variance(t, w);

    auto nested = [](const ConfidenceInterval& narrow, const ConfidenceInterval& wide) {
        CHECK(narrow.lo >= wide.lo);
        CHECK(narrow.hi <= wide.hi);
    };
    nested(crude_ci(t.baseline().empty() ? std::vector<double>{1, 2, 3} : t.baseline(), 0.10),
           crude_ci(std::vector<double>{1, 2, 3}, 0.05));
    nested(barton_ci(t, 0.10), barton_ci(t, 0.05));
    nested(lamqian_ci(t, if1, 0.10), lamqian_ci(t, if1, 0.05));
    nested(bias_corrected_ci(yd, 0.1, var, 5, 4, 0.10), bias_corrected_ci(yd, 0.1, var, 5, 4, 0.05));
}

TEST_CASE("insufficient structure is rejected") {
    CHECK_THROWS(crude_ci(std::vector<double>{1}, 0.05));
    const OutputTensor t = tensor_from({{1, 2}});
    CHECK_THROWS(barton_ci(t, 0.05));
}
