#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace roa {

/// Ordered list of non-negative integers identifying one random stream,
/// e.g. {experiment, b1, r, b2, level}. Equal paths derive equal seeds,
/// distinct paths derive distinct seeds (collision scan lives in the tests).
struct SeedPath {
    std::vector<std::uint64_t> components;

    SeedPath() = default;
    SeedPath(std::initializer_list<std::uint64_t> c) : components(c) {}

    SeedPath child(std::uint64_t c) const {
        SeedPath p(*this);
        p.components.push_back(c);
        return p;
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Pure function of (root, path); order-sensitive in the path components.
inline std::uint64_t derive_seed(std::uint64_t root, const SeedPath& path) {
    std::uint64_t h = root ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t s = h;
    h = detail::splitmix64(s);
    for (std::uint64_t c : path.components) {
        std::uint64_t t = c + 0x2545F4914F6CDD1DULL;
        h ^= detail::splitmix64(t);
        s = h;
        h = detail::splitmix64(s);
    }
    return h;
}

/// Counter-based stream seeded from a derived 64-bit value. splitmix64 is
/// full-period over 2^64 and plenty for the Monte-Carlo work here.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    Rng(std::uint64_t root, const SeedPath& path) : state_(derive_seed(root, path)) {}

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    /// Uniform on [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // multiply-shift; bias is negligible for n << 2^64
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via polar Marsaglia.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double next_exponential(double rate) {
        return -std::log1p(-next_double()) / rate;
    }

    /// Gamma with integer shape as a sum of exponentials (shapes here are 2, 3, 5).
    double next_gamma_int_shape(int shape, double rate) {
        double x = 0.0;
        for (int i = 0; i < shape; ++i) x += next_exponential(rate);
        return x;
    }

    /// Poisson by inverse transform; fine for the lambdas used here (<= 30).
    long next_poisson(double lambda) {
        double u = next_double();
        double p = std::exp(-lambda);
        double cdf = p;
        long k = 0;
        while (u > cdf) {
            ++k;
            p *= lambda / static_cast<double>(k);
            cdf += p;
            if (k > 10000) break; // unreachable for sane lambda
        }
        return k;
    }

    /// Binomial(m, p) by inverse transform over the pmf recurrence. Exact and
    /// portable; cost is O(k) for the sampled value k.
    long next_binomial(long m, double p) {
        if (m <= 0 || p <= 0.0) return 0;
        if (p >= 1.0) return m;
        double q = 1.0 - p;
        double pmf = std::pow(q, static_cast<double>(m));
        if (pmf == 0.0) {
            // pmf(0) underflowed (huge m); count Bernoulli trials instead
            long k = 0;
            for (long i = 0; i < m; ++i)
                if (next_double() < p) ++k;
            return k;
        }
        double u = next_double();
        double cdf = pmf;
        long k = 0;
        while (u > cdf && k < m) {
            ++k;
            pmf *= (static_cast<double>(m - k + 1) / static_cast<double>(k)) * (p / q);
            cdf += pmf;
        }
        return k;
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace roa
