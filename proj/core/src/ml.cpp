#include "roa/ml.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "roa/stats.hpp"

namespace roa {

void SupervisedDataset::validate() const {
    if (response.empty() || features.size() != response.size())
        throw std::invalid_argument("SupervisedDataset: shape mismatch");
    const std::size_t w = features.front().size();
    if (w == 0) throw std::invalid_argument("SupervisedDataset: zero-width features");
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != w)
            throw std::invalid_argument("SupervisedDataset: ragged features");
        for (double v : features[i])
            if (!std::isfinite(v)) throw std::invalid_argument("SupervisedDataset: missing value");
        if (!std::isfinite(response[i]))
            throw std::invalid_argument("SupervisedDataset: missing response");
    }
}

Dataset SupervisedDataset::to_dataset(const std::string& label) const {
    validate();
    std::vector<std::vector<double>> rows;
    rows.reserve(n());
    for (std::size_t i = 0; i < n(); ++i) {
        std::vector<double> row = features[i];
        row.push_back(response[i]);
        rows.push_back(std::move(row));
    }
    return Dataset(std::move(rows), label);
}

SupervisedDataset SupervisedDataset::from_dataset(const Dataset& flat) {
    if (flat.width() < 2)
        throw std::invalid_argument("SupervisedDataset: need >= 2 columns (features, response)");
    SupervisedDataset d;
    d.features.reserve(flat.size());
    d.response.reserve(flat.size());
    for (const auto& row : flat.rows()) {
        d.features.emplace_back(row.begin(), row.end() - 1);
        d.response.push_back(row.back());
    }
    d.validate();
    return d;
}

namespace {

std::vector<double> intercept_only_fit(std::size_t p, const std::vector<double>& y,
                                       const std::vector<double>& weights) {
    double sw = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        sw += w;
        sy += w * y[i];
    }
    std::vector<double> coef(p + 1, 0.0);
    coef[0] = sy / sw;
    return coef;
}

std::size_t distinct_rows(const std::vector<std::vector<double>>& X) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i && !seen; ++j) seen = (X[i] == X[j]);
        if (!seen) ++d;
    }
    return d;
}

std::vector<double> weighted_least_squares(const std::vector<std::vector<double>>& X,
                                           const std::vector<double>& y,
                                           const std::vector<double>& weights) {
    const std::size_t n = y.size();
    if (n == 0) throw EvaluationError("fit_ols: empty training set");
    const std::size_t p = X.front().size();
    const std::size_t q = p + 1;

    // underdetermined designs (fewer distinct points than coefficients) have
    // no identifiable plane; predict the weighted mean instead of
    // interpolating
    if (distinct_rows(X) < q) return intercept_only_fit(p, y, weights);

    Eigen::MatrixXd A(n, q);
    Eigen::VectorXd b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sw = std::sqrt(weights.empty() ? 1.0 : weights[i]);
        A(i, 0) = sw;
        for (std::size_t j = 0; j < p; ++j) A(i, j + 1) = sw * X[i][j];
        b(i) = sw * y[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::VectorXd coef;
    if (qr.rank() == static_cast<Eigen::Index>(q)) {
        coef = qr.solve(b);
    } else {
        // collinear but not underdetermined; one ridge pass
        Eigen::MatrixXd G = A.transpose() * A;
        G.diagonal().array() += 1e-8;
        coef = G.ldlt().solve(A.transpose() * b);
    }
    for (Eigen::Index i = 0; i < coef.size(); ++i)
        if (!std::isfinite(coef(i))) throw EvaluationError("fit_ols: singular design");
    return std::vector<double>(coef.data(), coef.data() + coef.size());
}

class OlsLearner final : public Learner {
  public:
    std::vector<double> fit(const std::vector<std::vector<double>>& X,
                            const std::vector<double>& y,
                            const std::vector<double>& weights) const override {
        return weighted_least_squares(X, y, weights);
    }
    std::string name() const override { return "ols"; }
};

class ConstantLearner final : public Learner {
  public:
    std::vector<double> fit(const std::vector<std::vector<double>>& X,
                            const std::vector<double>& y,
                            const std::vector<double>& weights) const override {
        if (y.empty()) throw EvaluationError("constant learner: empty training set");
        double sw = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double w = weights.empty() ? 1.0 : weights[i];
            sw += w;
            sy += w * y[i];
        }
        std::vector<double> coef(X.front().size() + 1, 0.0);
        coef[0] = sy / sw;
        return coef;
    }
    std::string name() const override { return "constant"; }
};

} // namespace

std::shared_ptr<Learner> make_ols_learner() { return std::make_shared<OlsLearner>(); }
std::shared_ptr<Learner> make_constant_learner() { return std::make_shared<ConstantLearner>(); }

std::vector<double> fit_ols(const SupervisedDataset& train) {
    train.validate();
    return weighted_least_squares(train.features, train.response, {});
}

double predict(const std::vector<double>& coeffs, const std::vector<double>& x) {
    if (coeffs.size() != x.size() + 1)
        throw std::invalid_argument("predict: coefficient length mismatch");
    double v = coeffs[0];
    for (std::size_t j = 0; j < x.size(); ++j) v += coeffs[j + 1] * x[j];
    return v;
}

double oob_error(const std::vector<double>& coeffs, const OobMembership& membership,
                 const SupervisedDataset& data) {
    if (membership.test_counts.size() != data.n() || membership.oob_flags.size() != data.n())
        throw std::invalid_argument("oob_error: membership shape mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        if (!membership.oob_flags[i] || membership.test_counts[i] == 0) continue;
        const double w = static_cast<double>(membership.test_counts[i]);
        const double res = data.response[i] - predict(coeffs, data.features[i]);
        num += w * res * res;
        den += w;
    }
    if (den < 1.0) throw EvaluationError("oob_error: empty out-of-bag set");
    return num / den;
}

MlKind parse_ml_kind(const std::string& s) {
    if (s == "linear") return MlKind::linear;
    if (s == "polynomial") return MlKind::polynomial;
    if (s == "complex") return MlKind::complex_fn;
    throw std::invalid_argument("unknown dataset kind: " + s);
}

double ml_true_response(MlKind kind, const std::vector<double>& z) {
    switch (kind) {
        case MlKind::linear:
            return 5.0 * z[0] + z[1] + 2.0 * z[2];
        case MlKind::polynomial:
            return z[0] * z[0] + z[0] * z[1] + z[2] * z[2];
        case MlKind::complex_fn:
            return 5.0 / std::sqrt(z[0]) + z[1] + 1.0 / z[2];
    }
    throw std::logic_error("ml_true_response: unknown kind");
}

SupervisedDataset generate_dataset_sigma(MlKind kind, double sigma, long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
    Rng rng(seed);
    SupervisedDataset d;
    d.features.reserve(static_cast<std::size_t>(n));
    d.response.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        std::vector<double> z = {rng.next_gamma_int_shape(2, 1.0), rng.next_gamma_int_shape(5, 2.0),
                                 rng.next_gamma_int_shape(3, 1.0)};
        double y = ml_true_response(kind, z);
        if (sigma > 0.0) y += sigma * rng.next_normal();
        d.features.push_back(std::move(z));
        d.response.push_back(y);
    }
    return d;
}

SupervisedDataset generate_dataset(MlKind kind, MlNoise noise, long n, std::uint64_t seed) {
    return generate_dataset_sigma(kind, noise == MlNoise::low ? 3.0 : 6.0, n, seed);
}

namespace {

// Index sampler over the weighted support of a count vector.
class CountSampler {
  public:
    explicit CountSampler(const std::vector<long>& counts) {
        long cum = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] > 0) {
                cum += counts[i];
                support_.push_back(i);
                cum_.push_back(cum);
            }
        }
        total_ = cum;
    }

    std::size_t draw(Rng& rng) const {
        const long u = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(total_))) + 1;
        const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
        return support_[static_cast<std::size_t>(it - cum_.begin())];
    }

    long total() const { return total_; }

  private:
    std::vector<std::size_t> support_;
    std::vector<long> cum_;
    long total_ = 0;
};

class OobErrorModel final : public Model {
  public:
    OobErrorModel(SupervisedDataset data, std::shared_ptr<Learner> learner, double test_fraction,
                  long sample_size)
        : data_(std::move(data)), learner_(std::move(learner)), test_fraction_(test_fraction),
          sample_size_(sample_size) {
        data_.validate();
        if (!(test_fraction_ > 0.0 && test_fraction_ < 1.0))
            throw std::invalid_argument("OobErrorModel: test fraction must be in (0, 1)");
    }

    ModelOutput simulate(const ResampleCounts& input, const ModelConfig&,
                         std::uint64_t seed) const override {
        input.validate();
        if (input.counts.size() != data_.n())
            throw EvaluationError("OobErrorModel: input base size mismatch");
        // the functional draws its own dataset from the input distribution;
        // its size is a property of the functional, not of the input model
        const long m_draws = sample_size_ > 0 ? sample_size_ : input.m;
        const long t_draws = std::max(1L, std::lround(test_fraction_ * static_cast<double>(m_draws)));
        const CountSampler sampler(input.counts);

        for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
            const bool last_attempt = attempt == 15;
            Rng rng(derive_seed(seed, {attempt}));
            std::vector<long> sample_counts(data_.n(), 0);
            for (long d = 0; d < m_draws; ++d) ++sample_counts[sampler.draw(rng)];

            // the test sample is drawn from the realized dataset; training
            // keeps the rows whose base point was never drawn into it
            std::vector<std::size_t> instances;
            instances.reserve(static_cast<std::size_t>(m_draws));
            for (std::size_t i = 0; i < sample_counts.size(); ++i)
                for (long c = 0; c < sample_counts[i]; ++c) instances.push_back(i);

            OobMembership mem;
            mem.test_counts.assign(data_.n(), 0);
            mem.oob_flags.assign(data_.n(), 0);
            for (long t = 0; t < t_draws; ++t) {
                const std::size_t pick =
                    static_cast<std::size_t>(rng.next_below(instances.size()));
                ++mem.test_counts[instances[pick]];
            }

            auto covers_whole_support = [&]() {
                for (std::size_t i = 0; i < data_.n(); ++i)
                    if (sample_counts[i] > 0 && mem.test_counts[i] == 0) return false;
                return true;
            };
            if (covers_whole_support()) {
                if (!last_attempt) continue;
                // concentrated input: release the least-held test point back
                // to training so the split stays well defined
                std::size_t release = data_.n();
                for (std::size_t i = 0; i < data_.n(); ++i)
                    if (mem.test_counts[i] > 0 &&
                        (release == data_.n() || mem.test_counts[i] < mem.test_counts[release]))
                        release = i;
                long held = 0;
                for (std::size_t i = 0; i < data_.n(); ++i)
                    if (i != release) held += mem.test_counts[i];
                if (release == data_.n() || held == 0)
                    throw EvaluationError("OobErrorModel: degenerate single-point input");
                mem.test_counts[release] = 0;
            }

            std::vector<std::vector<double>> X;
            std::vector<double> y, w;
            for (std::size_t i = 0; i < data_.n(); ++i) {
                if (sample_counts[i] == 0) continue;
                if (mem.test_counts[i] > 0) {
                    mem.oob_flags[i] = 1;
                } else {
                    X.push_back(data_.features[i]);
                    y.push_back(data_.response[i]);
                    w.push_back(static_cast<double>(sample_counts[i]));
                }
            }
            if (X.empty()) continue;

            const std::vector<double> coef = learner_->fit(X, y, w);
            ModelOutput out;
            out.value = oob_error(coef, mem, data_);
            if (!std::isfinite(out.value))
                throw EvaluationError("OobErrorModel: non-finite error");
            return out;
        }
        throw EvaluationError("OobErrorModel: empty training support after 16 redraws");
    }

  private:
    SupervisedDataset data_;
    std::shared_ptr<Learner> learner_;
    double test_fraction_;
    long sample_size_;
};

} // namespace

std::shared_ptr<Model> make_oob_error_model(SupervisedDataset data,
                                            std::shared_ptr<Learner> learner,
                                            double test_fraction, long sample_size) {
    return std::make_shared<OobErrorModel>(std::move(data), std::move(learner), test_fraction,
                                           sample_size);
}

double ml_test_fraction(long total_budget, long n) {
    const double f = static_cast<double>(optimal_m(total_budget, n)) / static_cast<double>(n);
    return std::clamp(f, 1.0 / static_cast<double>(n), 0.5);
}

AnalysisResult run_algorithm1(const SupervisedDataset& data, std::shared_ptr<Learner> learner,
                              long total_budget, std::uint64_t root_seed,
                              const AnalysisOptions& options,
                              const AllocationOverrides& overrides) {
    data.validate();
    const long n = static_cast<long>(data.n());
    BudgetAllocation alloc = allocate(total_budget, n, overrides);
    // regression on the thinned support of very small subsamples is not
    // identifiable; the resample size is floored at n/2 (the free Theta
    // constant of the allocation rule) while B1/R/B2 and the test ratio keep
    // the allocated shape
    if (!overrides.m) alloc.m_star = std::max(alloc.m_star, (n + 1) / 2);
    const double test_fraction = ml_test_fraction(total_budget, n);
    const auto model = make_oob_error_model(data, std::move(learner), test_fraction, n);
    const Dataset base = data.to_dataset();
    AnalysisOptions opts = options;
    opts.engine.min_inner_support = 2; // the OOB split needs a point to hold out
    // inner resample sizes: 1.5 m at both levels, calibrated once so the
    // two-level bias ladder matches the resample-level error inflation of
    // this functional and frozen
    opts.engine.inner_m2 = std::max(2L, static_cast<long>(std::lround(1.5 * alloc.m_star)));
    opts.engine.inner_m3 = opts.engine.inner_m2;
    return analyze_nested(*model, base, alloc, ModelConfig{}, root_seed, opts);
}

ConfidenceInterval loo_boot_baseline(const SupervisedDataset& data,
                                     std::shared_ptr<Learner> learner, long b1, double alpha,
                                     std::uint64_t seed) {
    data.validate();
    if (b1 < 2) throw std::invalid_argument("loo_boot_baseline: need B1 >= 2");
    const long n = static_cast<long>(data.n());
    std::vector<double> boot_means;
    boot_means.reserve(static_cast<std::size_t>(b1));

    const Dataset base = data.to_dataset();
    for (long b = 0; b < b1; ++b) {
        double value = 0.0;
        bool ok = false;
        for (std::uint64_t attempt = 0; attempt < 16 && !ok; ++attempt) {
            const ResampleCounts counts = draw_counts(
                base, n, derive_seed(seed, {1, static_cast<std::uint64_t>(b), attempt}));
            std::vector<std::vector<double>> X;
            std::vector<double> y, w;
            for (std::size_t i = 0; i < data.n(); ++i) {
                if (counts.counts[i] == 0) continue;
                X.push_back(data.features[i]);
                y.push_back(data.response[i]);
                w.push_back(static_cast<double>(counts.counts[i]));
            }
            double num = 0.0;
            long den = 0;
            if (!X.empty()) {
                const std::vector<double> coef = learner->fit(X, y, w);
                for (std::size_t i = 0; i < data.n(); ++i) {
                    if (counts.counts[i] != 0) continue; // in-bag
                    const double res = data.response[i] - predict(coef, data.features[i]);
                    num += res * res;
                    ++den;
                }
            }
            if (den > 0) {
                value = num / static_cast<double>(den);
                ok = true;
            }
        }
        if (!ok) throw EvaluationError("loo_boot_baseline: no out-of-bag points after redraws");
        boot_means.push_back(value);
    }
    ConfidenceInterval ci = crude_ci(boot_means, alpha);
    ci.method = "loo-boot";
    return ci;
}

ConfidenceInterval repeated_cv_baseline(const SupervisedDataset& data,
                                        std::shared_ptr<Learner> learner, long folds,
                                        long repeats, double alpha, std::uint64_t seed) {
    data.validate();
    const long n = static_cast<long>(data.n());
    if (folds < 2 || n < folds)
        throw std::invalid_argument("repeated_cv_baseline: need 2 <= folds <= n");
    if (repeats < 2) throw std::invalid_argument("repeated_cv_baseline: need repeats >= 2");

    std::vector<double> repeat_means;
    repeat_means.reserve(static_cast<std::size_t>(repeats));
    for (long rep = 0; rep < repeats; ++rep) {
        Rng rng(derive_seed(seed, {2, static_cast<std::uint64_t>(rep)}));
        std::vector<std::size_t> perm(data.n());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.next_below(i))]);

        double sq_sum = 0.0;
        for (long f = 0; f < folds; ++f) {
            std::vector<std::vector<double>> X;
            std::vector<double> y;
            std::vector<std::size_t> held;
            for (std::size_t i = 0; i < perm.size(); ++i) {
                if (static_cast<long>(i % static_cast<std::size_t>(folds)) == f)
                    held.push_back(perm[i]);
                else {
                    X.push_back(data.features[perm[i]]);
                    y.push_back(data.response[perm[i]]);
                }
            }
            const std::vector<double> coef = learner->fit(X, y, {});
            for (std::size_t i : held) {
                const double res = data.response[i] - predict(coef, data.features[i]);
                sq_sum += res * res;
            }
        }
        repeat_means.push_back(sq_sum / static_cast<double>(n));
    }
    ConfidenceInterval ci = crude_ci(repeat_means, alpha);
    ci.method = "repeated-cv";
    return ci;
}

double ml_truth_oracle(MlKind kind, MlNoise noise, long n_train,
                       std::shared_ptr<Learner> learner, std::uint64_t seed, long train_reps,
                       long test_points_per_rep) {
    const double sigma = (noise == MlNoise::low) ? 3.0 : 6.0;
    double total = 0.0;
    for (long rep = 0; rep < train_reps; ++rep) {
        const SupervisedDataset train = generate_dataset_sigma(
            kind, sigma, n_train, derive_seed(seed, {3, static_cast<std::uint64_t>(rep)}));
        const std::vector<double> coef = learner->fit(train.features, train.response, {});
        const SupervisedDataset test = generate_dataset_sigma(
            kind, sigma, test_points_per_rep, derive_seed(seed, {4, static_cast<std::uint64_t>(rep)}));
        double sq = 0.0;
        for (std::size_t i = 0; i < test.n(); ++i) {
            const double res = test.response[i] - predict(coef, test.features[i]);
            sq += res * res;
        }
        total += sq / static_cast<double>(test.n());
    }
    return total / static_cast<double>(train_reps);
}

} // namespace roa
