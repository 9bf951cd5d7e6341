#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "threatwatch/classify/example.hpp"

namespace threatwatch::classify {

struct SvmParams {
  double c = 5.0;
  double step_size = 0.05;
  int max_iterations = 100;
  std::uint64_t seed = 1;

  bool operator==(const SvmParams&) const = default;
};

/// Linear decision function w·x + b.
struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  SvmParams params;

  double decision(const features::FeatureVector& x) const;
  /// Positive iff w·x + b >= 0. Throws InvalidArgument on dimension mismatch.
  Label predict(const features::FeatureVector& x) const { return decision(x) >= 0.0 ? Label::Positive : Label::Negative; }

  bool operator==(const LinearSvmModel&) const = default;
};

/// Minimizes (λ/2)|w|² + (1/n) Σ max(0, 1 − y(w·x + b)) with λ = 1 / (C n).
/// Each iteration is one pass over a seeded shuffle of the data with
/// per-example subgradient steps of size step_size / √t, t the 1-based
/// iteration. The bias is not regularized.
LinearSvmModel train_svm(std::span<const LabeledExample> data, const SvmParams& params);

nlohmann::json to_json(const LinearSvmModel& m);
LinearSvmModel svm_from_json(const nlohmann::json& j);

}  // namespace threatwatch::classify
