#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "roa/resample.hpp"

namespace roa {

/// Fixed decision x plus model-specific settings. The decision is immutable
/// for the lifetime of an analysis.
struct ModelConfig {
    std::vector<double> decision;
    std::map<std::string, double> params;
};

struct ModelOutput {
    double value = 0.0;
    double runtime_seconds = 0.0;
};

/// Raised when a model evaluation fails; the analysis engine aborts the
/// experiment rather than imputing.
class EvaluationError : public std::runtime_error {
  public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// Contract: the seed drives all stochasticity inside the run, the model
/// draws its own inputs from the distribution defined by `input`, and
/// E[value | input] = theta(input). Implementations must be safe to call
/// from many threads at once (read-only after construction).
class Model {
  public:
    virtual ~Model() = default;
    virtual ModelOutput simulate(const ResampleCounts& input, const ModelConfig& config,
                                 std::uint64_t seed) const = 0;
};

/// Analytic oracle: Y = (mean of k i.i.d. draws from F)^power.
/// power=1: theta(F) = E_F[D], plug-in unbiased.
/// power=2: theta(F) = E_F[D]^2 + Var_F(D)/k, with closed-form plug-in bias.
std::shared_ptr<Model> make_mean_model(int k, int power);

/// Always returns the same value; handy in tests.
std::shared_ptr<Model> make_constant_model(double value);

/// Closed-form theta for the mean model on a given discrete distribution.
double mean_model_theta(const ResampleCounts& dist, int k, int power);
double mean_model_theta(double mu, double sigma2, int k, int power);

} // namespace roa
