#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "roa/ci.hpp"
#include "roa/dataset.hpp"
#include "roa/engine.hpp"
#include "roa/model.hpp"

namespace roa {

/// (features, response) rows; no missing values.
struct SupervisedDataset {
    std::vector<std::vector<double>> features; // n rows of width p
    std::vector<double> response;              // length n

    std::size_t n() const { return response.size(); }
    std::size_t p() const { return features.empty() ? 0 : features.front().size(); }
    void validate() const;

    /// Flat view (z_1..z_p, y) used as the resampling base.
    Dataset to_dataset(const std::string& label = "supervised") const;
    static SupervisedDataset from_dataset(const Dataset& flat);
};

/// Per-replication test membership: N_{b1,r,i} test counts over base indices
/// and the out-of-bag indicator (in the test draw and absent from training).
struct OobMembership {
    std::vector<long> test_counts;
    std::vector<char> oob_flags;
};

/// Regression learner contract: fit returns (intercept, slopes...) of length
/// p + 1. Implementations must be stateless/thread-safe.
class Learner {
  public:
    virtual ~Learner() = default;
    virtual std::vector<double> fit(const std::vector<std::vector<double>>& X,
                                    const std::vector<double>& y,
                                    const std::vector<double>& weights) const = 0;
    virtual std::string name() const = 0;
};

std::shared_ptr<Learner> make_ols_learner();
std::shared_ptr<Learner> make_constant_learner();

/// Least squares with intercept; falls back to a 1e-8 ridge when the design
/// is rank deficient (tiny resamples duplicate rows), and fails the
/// evaluation if even that is singular.
std::vector<double> fit_ols(const SupervisedDataset& train);

double predict(const std::vector<double>& coeffs, const std::vector<double>& x);

/// Weighted out-of-bag squared error: sum_i I_i N_i (y_i - yhat_i)^2 / sum_i I_i N_i.
double oob_error(const std::vector<double>& coeffs, const OobMembership& membership,
                 const SupervisedDataset& data);

enum class MlKind { linear, polynomial, complex_fn };
enum class MlNoise { low, high };

MlKind parse_ml_kind(const std::string& s);

/// Table-style generators: z1 ~ Gamma(2,1), z2 ~ Gamma(5,2), z3 ~ Gamma(3,1),
/// response per the chosen formula plus Normal(0, sigma) noise.
SupervisedDataset generate_dataset(MlKind kind, MlNoise noise, long n, std::uint64_t seed);
SupervisedDataset generate_dataset_sigma(MlKind kind, double sigma, long n, std::uint64_t seed);

/// Noiseless response value for one feature row (test oracle).
double ml_true_response(MlKind kind, const std::vector<double>& z);

/// The per-cell prediction-error functional as a simulate-compatible model:
/// given an input distribution, draw a dataset of `sample_size` points from
/// it (0 = the distribution's own draw count), hold out a test sample
/// (fraction kappa, at least one point), train on the support not drawn into
/// the test, and return the out-of-bag weighted squared error. Degenerate
/// splits are redrawn with fresh derived seeds, at most 16 attempts.
std::shared_ptr<Model> make_oob_error_model(SupervisedDataset data,
                                            std::shared_ptr<Learner> learner,
                                            double test_fraction, long sample_size = 0);

/// Test-sample ratio of the prediction-error functional: the optimal
/// subsample ratio of the budget rule, clamped to [1/n, 1/2].
double ml_test_fraction(long total_budget, long n);

/// Full pipeline on one dataset: budget allocation, nested m-out-of-n
/// resampling of the OOB-error model, FIB + HOIF debiasing, variance and the
/// CI set.
AnalysisResult run_algorithm1(const SupervisedDataset& data, std::shared_ptr<Learner> learner,
                              long total_budget, std::uint64_t root_seed,
                              const AnalysisOptions& options = {},
                              const AllocationOverrides& overrides = {});

/// Leave-one-out bootstrap baseline: B1 n-out-of-n bootstrap fits, each
/// scored on its out-of-bag points; t-interval over per-bootstrap means.
ConfidenceInterval loo_boot_baseline(const SupervisedDataset& data,
                                     std::shared_ptr<Learner> learner, long b1, double alpha,
                                     std::uint64_t seed);

/// repeats x k-fold cross-validation; t-interval over repeat-level means.
ConfidenceInterval repeated_cv_baseline(const SupervisedDataset& data,
                                        std::shared_ptr<Learner> learner, long folds,
                                        long repeats, double alpha, std::uint64_t seed);

/// Monte-Carlo estimate of the true expected generalization error of the
/// learner at training size n_train: fresh training draws from the
/// generator, each scored on a large fresh test draw.
double ml_truth_oracle(MlKind kind, MlNoise noise, long n_train,
                       std::shared_ptr<Learner> learner, std::uint64_t seed,
                       long train_reps = 200, long test_points_per_rep = 5000);

} // namespace roa
