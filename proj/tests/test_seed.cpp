#include <doctest.h>

#include <unordered_set>

#include "roa/rng.hpp"

using namespace roa;

TEST_CASE("derived seeds are deterministic") {
    CHECK(derive_seed(7, {1, 2}) == derive_seed(7, {1, 2}));
    CHECK(derive_seed(123456789, {0, 0, 0}) == derive_seed(123456789, {0, 0, 0}));
}

TEST_CASE("path ordering matters") {
    CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
    CHECK(derive_seed(7, {1}) != derive_seed(7, {1, 0}));
    CHECK(derive_seed(7, {}) != derive_seed(8, {}));
}

TEST_CASE("no collisions over 1e5 random distinct paths") {
    // exhaustive scan over randomly generated distinct paths of length <= 6
    Rng gen(0xC0FFEE);
    std::unordered_set<std::string> seen_paths;
    std::unordered_set<std::uint64_t> seeds;
    int count = 0;
    while (count < 100000) {
        SeedPath p;
        const int len = 1 + static_cast<int>(gen.next_below(6));
        std::string key;
        for (int i = 0; i < len; ++i) {
            const std::uint64_t c = gen.next_below(1u << 20);
            p.components.push_back(c);
            key += std::to_string(c) + ",";
        }
        if (!seen_paths.insert(key).second) continue;
        seeds.insert(derive_seed(42, p));
        ++count;
    }
    CHECK(seeds.size() == 100000);
}

TEST_CASE("uniform doubles live in [0,1)") {
    Rng r(5);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("poisson moments") {
    Rng r(99);
    double s = 0.0, s2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(r.next_poisson(30.0));
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(30.0).epsilon(0.01));
    CHECK(var == doctest::Approx(30.0).epsilon(0.03));
}

TEST_CASE("binomial mean") {
    Rng r(17);
    double s = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) s += static_cast<double>(r.next_binomial(20, 0.3));
    CHECK(s / n == doctest::Approx(6.0).epsilon(0.02));
}
