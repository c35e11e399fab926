#include <doctest.h>

#include <cmath>

#include "roa/model.hpp"
#include "roa/stats.hpp"

using namespace roa;

TEST_CASE("degenerate support returns the constant") {
    const Dataset d = Dataset::from_values({3.5});
    ResampleCounts c(std::vector<long>{6}, d);
    const auto model = make_mean_model(4, 1);
    for (std::uint64_t s = 0; s < 10; ++s)
        CHECK(model->simulate(c, {}, s).value == 3.5);
}

TEST_CASE("same input and seed give identical values") {
    const Dataset d = Dataset::from_values({1, 2, 3, 4, 5});
    const ResampleCounts c = draw_counts(d, 5, 77);
    const auto model = make_mean_model(3, 2);
    CHECK(model->simulate(c, {}, 42).value == model->simulate(c, {}, 42).value);
    CHECK(model->simulate(c, {}, 42).value != model->simulate(c, {}, 43).value);
}

TEST_CASE("k=1 mean model averages to the resample mean") {
    const Dataset d = Dataset::from_values({2, 4, 4, 8, 12});
    const ResampleCounts c = draw_counts(d, 5, 5);
    const auto model = make_mean_model(1, 1);

    double resample_mean = 0.0;
    for (std::size_t i = 0; i < c.counts.size(); ++i)
        resample_mean += static_cast<double>(c.counts[i]) / 5.0 * d.value(i);

    const int reps = 10000;
    std::vector<double> ys(reps);
    for (int s = 0; s < reps; ++s) ys[s] = model->simulate(c, {}, 1000 + s).value;
    const double m = mean(ys);
    const double se = sample_sd(ys) / std::sqrt(static_cast<double>(reps));
    CHECK(std::fabs(m - resample_mean) < 3.0 * se);
}

TEST_CASE("conditional unbiasedness: mean over seeds matches theta(F*)") {
    const Dataset d = Dataset::from_values({1, 3, 5, 7, 9, 11, 2, 6});
    const ResampleCounts c = draw_counts(d, 8, 13);
    for (int power : {1, 2}) {
        const int k = 3;
        const auto model = make_mean_model(k, power);
        const double theta = mean_model_theta(c, k, power);
        const int reps = 10000;
        std::vector<double> ys(reps);
        for (int s = 0; s < reps; ++s) ys[s] = model->simulate(c, {}, 7000 + s).value;
        const double se = sample_sd(ys) / std::sqrt(static_cast<double>(reps));
        CHECK(std::fabs(mean(ys) - theta) < 4.0 * se);
    }
}

TEST_CASE("power=2 closed form: theta = mu^2 + var/k") {
    CHECK(mean_model_theta(2.0, 9.0, 3, 2) == doctest::Approx(4.0 + 3.0));
    CHECK(mean_model_theta(2.0, 9.0, 1, 1) == doctest::Approx(2.0));

    const Dataset d = Dataset::from_values({1, 2, 3, 4});
    ResampleCounts c(std::vector<long>{1, 1, 1, 1}, d);
    // population mean 2.5, population variance 1.25
    CHECK(mean_model_theta(c, 5, 2) == doctest::Approx(6.25 + 0.25));
}

TEST_CASE("constant model ignores input and seed") {
    const Dataset d = Dataset::from_values({1, 2});
    ResampleCounts c(std::vector<long>{1, 1}, d);
    const auto model = make_constant_model(13.0);
    CHECK(model->simulate(c, {}, 7).value == 13.0);
    CHECK(model->simulate(c, {}, 8).value == 13.0);
}

TEST_CASE("mean model rejects bad construction") {
    CHECK_THROWS(make_mean_model(0, 1));
    CHECK_THROWS(make_mean_model(2, 3));
}
