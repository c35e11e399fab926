#include "roa/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace roa {

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("sample_variance: need n >= 2");
    const double mu = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return ss / static_cast<double>(v.size() - 1);
}

double population_variance(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("population_variance: empty");
    const double mu = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return ss / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) { return std::sqrt(sample_variance(v)); }

double sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("sample_covariance: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("sample_covariance: need n >= 2");
    const double mx = mean(x);
    const double my = mean(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size() - 1);
}

double student_t_quantile(double p, double dof) {
    if (dof < 1.0) throw std::invalid_argument("student_t_quantile: dof must be >= 1");
    boost::math::students_t dist(dof);
    return boost::math::quantile(dist, p);
}

double normal_quantile(double p) {
    boost::math::normal dist;
    return boost::math::quantile(dist, p);
}

} // namespace roa
