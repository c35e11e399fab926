#include <doctest.h>

#include <cmath>

#include "roa/fib.hpp"
#include "roa/rng.hpp"
#include "roa/stats.hpp"

using namespace roa;

namespace {

FibCell cell_of(double y, std::vector<double> y2, std::vector<double> y3, double ycv = 0.0) {
    FibCell c;
    c.y_star = y;
    c.y_2star = std::move(y2);
    c.y_3star = std::move(y3);
    c.y_cv_extra = ycv;
    return c;
}

FibCell random_cell(Rng& rng, std::size_t b2) {
    std::vector<double> y2(b2), y3(b2);
    for (auto& v : y2) v = rng.next_normal() * 3.0 + 1.0;
    for (auto& v : y3) v = rng.next_normal() * 3.0 - 0.5;
    return cell_of(rng.next_normal(), std::move(y2), std::move(y3), rng.next_normal());
}

} // namespace

TEST_CASE("hand-evaluated bias quantities") {
    const FibCell c = cell_of(10, {12}, {15});
    CHECK(delta_star(c) == doctest::Approx(2.0));
    CHECK(gamma_hat(c) == doctest::Approx(15.0 - 24.0 + 10.0));
    CHECK(debias_output(c) == doctest::Approx(7.0));
    CHECK(w_hat(c) == doctest::Approx(3.0));
}

TEST_CASE("degenerate levels give zero bias") {
    const FibCell c = cell_of(4, {4, 4, 4}, {4, 4, 4});
    CHECK(delta_star(c) == doctest::Approx(0.0));
    CHECK(gamma_hat(c) == doctest::Approx(0.0));
    CHECK(debias_output(c) == doctest::Approx(4.0));
}

TEST_CASE("w identity: delta + gamma equals mean(y3) - mean(y2)") {
    Rng rng(71);
    for (int i = 0; i < 500; ++i) {
        const FibCell c = random_cell(rng, 1 + static_cast<std::size_t>(rng.next_below(8)));
        const double lhs = delta_star(c) + gamma_hat(c);
        const double rhs = mean(c.y_3star) - mean(c.y_2star);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(debias_output(c) == doctest::Approx(c.y_star - w_hat(c)).epsilon(1e-12));
    }
}

TEST_CASE("t test: equal nonzero terms are infinitely significant") {
    const FibCell c = cell_of(0, {1, 1, 1}, {3, 3, 3});
    const TTestResult t = t_test(c, 0.05);
    CHECK(std::isinf(t.t_stat));
    CHECK(t.significant);
}

TEST_CASE("t test: symmetric terms around zero are not significant") {
    const FibCell c = cell_of(0, {0, 0}, {1, -1});
    const TTestResult t = t_test(c, 0.05);
    CHECK(!t.significant);
    CHECK(t.ci_lo < 0.0);
    CHECK(t.ci_hi > 0.0);
}

TEST_CASE("t test unavailable when B2 < 2") {
    const FibCell c = cell_of(0, {1}, {2});
    const TTestResult t = t_test(c, 0.05);
    CHECK(!t.significant);
}

TEST_CASE("t test calibration: 5% rejection of a true W") {
    // per-b2 terms ~ Normal(1, 1); testing H0: W = 1 at alpha = 0.05
    Rng rng(202);
    const int trials = 10000;
    int rejections = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> y2(30, 0.0), y3(30);
        for (auto& v : y3) v = 1.0 + rng.next_normal();
        const FibCell c = cell_of(0, y2, y3);
        if (t_test(c, 0.05, 1.0).significant) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / trials;
    CHECK(rate == doctest::Approx(0.05).epsilon(0.4)); // 5% +- 2%
    CHECK(rate > 0.03);
    CHECK(rate < 0.07);
}

TEST_CASE("cv coefficient hand cases") {
    std::vector<double> c = {1, -1, 2, -2};
    std::vector<double> w = {2, -2, 4, -4}; // W = 2 C exactly
    CHECK(cv_coefficient(w, c) == doctest::Approx(2.0));

    std::vector<double> zeros(4, 0.0);
    CHECK(cv_coefficient(w, zeros) == 0.0);
}

TEST_CASE("cv coefficient matches brute-force covariance ratio") {
    Rng rng(9);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.next_below(10);
        std::vector<double> w(n), c(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = rng.next_normal();
            c[i] = rng.next_normal();
        }
        // independent re-computation from raw sums
        double sw = 0, sc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sw += w[i];
            sc += c[i];
        }
        const double mw = sw / n, mc = sc / n;
        double cov = 0, var = 0;
        for (std::size_t i = 0; i < n; ++i) {
            cov += (w[i] - mw) * (c[i] - mc);
            var += (c[i] - mc) * (c[i] - mc);
        }
        if (var == 0.0) continue;
        CHECK(cv_coefficient(w, c) == doctest::Approx((cov / (n - 1.0)) / (var / (n - 1.0)))
                                          .epsilon(1e-12));
    }
}

TEST_CASE("variance-reduced w: c1 = 0 leaves w unchanged") {
    Rng rng(55);
    const FibCell c = random_cell(rng, 4);
    CHECK(w_hat_cv(c, 0.0) == doctest::Approx(w_hat(c)));
}

TEST_CASE("regression-slope control variate never increases sample variance") {
    // across random tensors, Var_r(W - c1 C) <= Var_r(W) when c1 is the
    // fitted slope (exact least-squares property)
    Rng rng(404);
    int violations = 0;
    const int tensors = 100;
    for (int t = 0; t < tensors; ++t) {
        const std::size_t R = 10;
        std::vector<FibCell> cells;
        std::vector<double> w(R), c(R);
        for (std::size_t r = 0; r < R; ++r) {
            FibCell cell = random_cell(rng, 4);
            w[r] = w_hat(cell);
            c[r] = control_value(cell);
            cells.push_back(std::move(cell));
        }
        const double c1 = cv_coefficient(w, c);
        std::vector<double> wcv(R);
        for (std::size_t r = 0; r < R; ++r) wcv[r] = w_hat_cv(cells[r], c1);
        if (sample_variance(wcv) > sample_variance(w) * (1.0 + 1e-12)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("grand mean of controls is near zero under a common model") {
    // C = Y_{R+1} - Y_r with both drawn from the same distribution
    Rng rng(606);
    std::vector<double> controls;
    for (int i = 0; i < 4000; ++i) controls.push_back(rng.next_normal() - rng.next_normal());
    const double se = sample_sd(controls) / std::sqrt(static_cast<double>(controls.size()));
    CHECK(std::fabs(mean(controls)) < 4.0 * se);
}
