#include "threatwatch/classify/evaluation.hpp"

#include <algorithm>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/random.hpp"

namespace threatwatch::classify {

void ConfusionCounts::add(Label truth, Label predicted) {
  if (truth == Label::Positive) {
    ++(predicted == Label::Positive ? tp : fn);
  } else {
    ++(predicted == Label::Negative ? tn : fp);
  }
}

std::optional<double> ConfusionCounts::tpr() const {
  if (tp + fn == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

std::optional<double> ConfusionCounts::tnr() const {
  if (tn + fp == 0) return std::nullopt;
  return static_cast<double>(tn) / static_cast<double>(tn + fp);
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

ConfusionCounts evaluate(const Predictor& predict, std::span<const LabeledExample> test) {
  if (test.empty()) throw InvalidArgument("empty test set");
  ConfusionCounts c;
  for (const auto& ex : test) c.add(ex.label, predict(ex.vector));
  return c;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> labels, std::size_t k,
                                                       std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("cross-validation needs at least two folds");
  if (labels.size() < k) throw InvalidArgument("fewer examples than folds");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == Label::Positive ? pos : neg).push_back(i);
  if (pos.size() < 2 || neg.size() < 2) throw InvalidArgument("each label needs at least two examples");
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(pos));
  rng.shuffle(std::span<std::size_t>(neg));
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (const auto* group : {&pos, &neg}) {
    for (auto idx : *group) folds[next++ % k].push_back(idx);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CrossValidationResult cross_validate(
    std::span<const Label> labels, std::size_t k_folds, std::uint64_t seed,
    const std::function<ConfusionCounts(std::span<const std::size_t>, std::span<const std::size_t>)>& run_fold) {
  auto folds = stratified_folds(labels, k_folds, seed);
  CrossValidationResult out;
  double tpr_sum = 0.0, tnr_sum = 0.0;
  std::size_t tpr_n = 0, tnr_n = 0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train.begin(), train.end());
    auto counts = run_fold(train, folds[f]);
    if (auto r = counts.tpr()) {
      tpr_sum += *r;
      ++tpr_n;
    }
    if (auto r = counts.tnr()) {
      tnr_sum += *r;
      ++tnr_n;
    }
    out.pooled += counts;
    out.folds.push_back(counts);
  }
  out.mean_tpr = tpr_n ? tpr_sum / static_cast<double>(tpr_n) : 0.0;
  out.mean_tnr = tnr_n ? tnr_sum / static_cast<double>(tnr_n) : 0.0;
  return out;
}

CrossValidationResult cross_validate(std::span<const LabeledExample> data, const Trainer& train,
                                     std::size_t k_folds, std::uint64_t seed) {
  std::vector<Label> labels;
  for (const auto& ex : data) labels.push_back(ex.label);
  return cross_validate(labels, k_folds, seed, [&](auto train_idx, auto test_idx) {
    std::vector<LabeledExample> train_set, test_set;
    for (auto i : train_idx) train_set.push_back(data[i]);
    for (auto i : test_idx) test_set.push_back(data[i]);
    return evaluate(train(train_set), test_set);
  });
}

}  // namespace threatwatch::classify
