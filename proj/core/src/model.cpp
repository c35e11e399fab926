#include "roa/model.hpp"

#include <cmath>

namespace roa {

namespace {

class MeanModel final : public Model {
  public:
    MeanModel(int k, int power) : k_(k), power_(power) {
        if (k < 1) throw std::invalid_argument("MeanModel: k must be >= 1");
        if (power != 1 && power != 2) throw std::invalid_argument("MeanModel: power must be 1 or 2");
    }

    ModelOutput simulate(const ResampleCounts& input, const ModelConfig&,
                         std::uint64_t seed) const override {
        WeightedQuantile q(input);
        Rng rng(seed);
        double s = 0.0;
        for (int j = 0; j < k_; ++j) s += q(rng.next_double());
        const double m = s / static_cast<double>(k_);
        ModelOutput out;
        out.value = (power_ == 1) ? m : m * m;
        if (!std::isfinite(out.value)) throw EvaluationError("MeanModel: non-finite output");
        return out;
    }

  private:
    int k_;
    int power_;
};

class ConstantModel final : public Model {
  public:
    explicit ConstantModel(double v) : v_(v) {}
    ModelOutput simulate(const ResampleCounts&, const ModelConfig&, std::uint64_t) const override {
        return ModelOutput{v_, 0.0};
    }

  private:
    double v_;
};

} // namespace

std::shared_ptr<Model> make_mean_model(int k, int power) {
    return std::make_shared<MeanModel>(k, power);
}

std::shared_ptr<Model> make_constant_model(double value) {
    return std::make_shared<ConstantModel>(value);
}

double mean_model_theta(double mu, double sigma2, int k, int power) {
    if (power == 1) return mu;
    return mu * mu + sigma2 / static_cast<double>(k);
}

double mean_model_theta(const ResampleCounts& dist, int k, int power) {
    dist.validate();
    double mu = 0.0;
    const double m = static_cast<double>(dist.m);
    for (std::size_t i = 0; i < dist.counts.size(); ++i)
        mu += static_cast<double>(dist.counts[i]) / m * dist.base->value(i);
    double var = 0.0;
    for (std::size_t i = 0; i < dist.counts.size(); ++i) {
        const double d = dist.base->value(i) - mu;
        var += static_cast<double>(dist.counts[i]) / m * d * d;
    }
    return mean_model_theta(mu, var, k, power);
}

} // namespace roa
