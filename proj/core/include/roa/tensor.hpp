#pragma once

#include <cstddef>
#include <vector>

#include "roa/fib.hpp"
#include "roa/resample.hpp"

namespace roa {

/// Model outputs of one nested analysis, indexed by (outer resample b1,
/// replication r, inner resample b2, level). Filled slot-by-slot by the
/// engine workers, then reduced in fixed index order.
class OutputTensor {
  public:
    OutputTensor() = default;
    OutputTensor(std::size_t b1_count, std::size_t r_count, std::size_t b2_count);

    std::size_t b1_count() const { return b1_; }
    std::size_t r_count() const { return r_; }
    std::size_t b2_count() const { return b2_; }
    std::size_t cell_count() const { return b1_ * r_; }

    double& y_star(std::size_t b1, std::size_t r) { return y_star_[b1 * r_ + r]; }
    double y_star(std::size_t b1, std::size_t r) const { return y_star_[b1 * r_ + r]; }

    double& y_2star(std::size_t b1, std::size_t r, std::size_t b2) {
        return y_2star_[(b1 * r_ + r) * b2_ + b2];
    }
    double y_2star(std::size_t b1, std::size_t r, std::size_t b2) const {
        return y_2star_[(b1 * r_ + r) * b2_ + b2];
    }

    double& y_3star(std::size_t b1, std::size_t r, std::size_t b2) {
        return y_3star_[(b1 * r_ + r) * b2_ + b2];
    }
    double y_3star(std::size_t b1, std::size_t r, std::size_t b2) const {
        return y_3star_[(b1 * r_ + r) * b2_ + b2];
    }

    double& y_cv(std::size_t b1) { return y_cv_[b1]; }
    double y_cv(std::size_t b1) const { return y_cv_[b1]; }

    /// Replications at the un-resampled empirical distribution (HOIF baseline).
    std::vector<double>& baseline() { return baseline_; }
    const std::vector<double>& baseline() const { return baseline_; }

    /// Outer resample counts, one per b1 (needed by the score functions).
    std::vector<ResampleCounts>& counts() { return counts_; }
    const std::vector<ResampleCounts>& counts() const { return counts_; }

    FibCell cell(std::size_t b1, std::size_t r) const;

    /// Row-major (b1, r) matrix of star outputs.
    std::vector<double> star_matrix() const { return y_star_; }

  private:
    std::size_t b1_ = 0, r_ = 0, b2_ = 0;
    std::vector<double> y_star_;
    std::vector<double> y_2star_;
    std::vector<double> y_3star_;
    std::vector<double> y_cv_;
    std::vector<double> baseline_;
    std::vector<ResampleCounts> counts_;
};

inline OutputTensor::OutputTensor(std::size_t b1_count, std::size_t r_count, std::size_t b2_count)
    : b1_(b1_count), r_(r_count), b2_(b2_count),
      y_star_(b1_count * r_count, 0.0),
      y_2star_(b1_count * r_count * b2_count, 0.0),
      y_3star_(b1_count * r_count * b2_count, 0.0),
      y_cv_(b1_count, 0.0) {}

inline FibCell OutputTensor::cell(std::size_t b1, std::size_t r) const {
    FibCell c;
    c.y_star = y_star(b1, r);
    c.y_2star.resize(b2_);
    c.y_3star.resize(b2_);
    for (std::size_t b2 = 0; b2 < b2_; ++b2) {
        c.y_2star[b2] = y_2star(b1, r, b2);
        c.y_3star[b2] = y_3star(b1, r, b2);
    }
    c.y_cv_extra = y_cv(b1);
    return c;
}

} // namespace roa
