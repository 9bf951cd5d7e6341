#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "threatwatch/classify/example.hpp"

namespace threatwatch::classify {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  void add(Label truth, Label predicted);
  std::size_t total() const { return tp + fp + tn + fn; }
  /// tp / (tp + fn); nullopt without positives.
  std::optional<double> tpr() const;
  /// tn / (tn + fp); nullopt without negatives.
  std::optional<double> tnr() const;

  ConfusionCounts& operator+=(const ConfusionCounts& o);
  bool operator==(const ConfusionCounts&) const = default;
};

using Predictor = std::function<Label(const features::FeatureVector&)>;
using Trainer = std::function<Predictor(std::span<const LabeledExample>)>;

/// Throws InvalidArgument for an empty test set.
ConfusionCounts evaluate(const Predictor& predict, std::span<const LabeledExample> test);

/// Seeded stratified partition of indices into k folds. Each label's indices
/// are shuffled and dealt round-robin, continuing the deal across labels.
/// Throws InvalidArgument when k < 2, k > n, or a label occurs fewer than
/// twice (some training fold would then miss that label).
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> labels, std::size_t k,
                                                       std::uint64_t seed);

struct CrossValidationResult {
  /// Mean over folds that contain at least one example of the class.
  double mean_tpr = 0.0;
  double mean_tnr = 0.0;
  std::vector<ConfusionCounts> folds;
  ConfusionCounts pooled;
};

/// `run_fold(train, validation)` returns the counts on the validation indices.
CrossValidationResult cross_validate(
    std::span<const Label> labels, std::size_t k_folds, std::uint64_t seed,
    const std::function<ConfusionCounts(std::span<const std::size_t>, std::span<const std::size_t>)>& run_fold);

CrossValidationResult cross_validate(std::span<const LabeledExample> data, const Trainer& train,
                                     std::size_t k_folds = 10, std::uint64_t seed = 1);

}  // namespace threatwatch::classify
