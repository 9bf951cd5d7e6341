#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "threatwatch/classify/example.hpp"

namespace threatwatch::classify {

enum class MlpSolver { Lbfgs, GradientDescent };

struct MlpParams {
  /// Hidden layer widths; input and output (2) layers are implied.
  std::vector<int> hidden = {10, 10, 10, 10, 10};
  int max_iterations = 200;
  std::uint64_t seed = 1;
  MlpSolver solver = MlpSolver::Lbfgs;
  /// Step for GradientDescent only.
  double learning_rate = 0.5;
  /// Stop once the gradient norm or the relative loss change falls below this.
  double tolerance = 1e-7;

  bool operator==(const MlpParams&) const = default;
};

/// Feed-forward network: logistic hidden units, two-unit softmax output.
/// Parameters are one flat vector; layer l stores its weights input-major
/// (W[i * out + j] connects input i to unit j) followed by its biases.
class MlpModel {
 public:
  MlpModel() = default;
  /// layer_sizes = {input, hidden..., 2}. All parameters start at zero.
  explicit MlpModel(std::vector<int> layer_sizes);

  /// Uniform(-r, r) weights with r = sqrt(6 / (in + out)), zero biases.
  static MlpModel random_init(std::vector<int> layer_sizes, std::uint64_t seed);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

  /// (P(negative), P(positive)).
  std::array<double, 2> probabilities(const features::FeatureVector& x) const;
  /// Positive iff P(positive) >= 0.5.
  Label predict(const features::FeatureVector& x) const;

  /// Mean cross-entropy over `data`; fills `grad` (resized) when non-null.
  double loss_and_gradient(std::span<const LabeledExample> data, std::vector<double>* grad) const;

  MlpParams params;

  bool operator==(const MlpModel&) const = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  void forward(const features::FeatureVector& x, std::vector<std::vector<double>>& activations) const;

  std::vector<int> layer_sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

/// Full-batch training of the mean cross-entropy from a seeded random init.
MlpModel train_mlp(std::span<const LabeledExample> data, const MlpParams& params);

nlohmann::json to_json(const MlpModel& m);
MlpModel mlp_from_json(const nlohmann::json& j);

}  // namespace threatwatch::classify
