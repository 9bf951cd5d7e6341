#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "threatwatch/classify/classifier.hpp"
#include "threatwatch/classify/evaluation.hpp"

namespace threatwatch::classify {

struct GridSpec {
  std::vector<double> svm_c = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5};
  std::vector<double> svm_step = {0.1, 0.5, 1, 1.5, 2, 5};
  std::vector<int> mlp_layers = {2, 3, 4, 5, 6, 7, 8};
  std::vector<int> mlp_neurons = {5, 7, 10, 12, 14, 16, 18, 20};
  std::vector<std::uint32_t> dimensions = {30, 100, 300, 1000, 3000};
  bool include_svm = true;
  bool include_mlp = true;
  /// Iteration budgets, seeds and solver come from here.
  ClassifierConfig base;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
};

struct GridRow {
  ClassifierConfig config;
  std::uint32_t dimension = 0;
  double tpr = 0.0;
  double tnr = 0.0;
  bool dominant = false;
  bool chosen = false;

  /// describe() plus " dim=<dimension>".
  std::string label() const;
};

struct GridReport {
  std::vector<GridRow> rows;
  /// Index into rows of the chosen configuration per classifier kind.
  std::optional<std::size_t> chosen_svm, chosen_mlp;

  /// Header: classifier,config,dimension,tpr,tnr,dominant,chosen
  std::string to_csv() const;
};

/// Cross-validates every configuration of the grid. Within each fold the
/// TF-IDF model is fitted on the training part only. Pareto selection runs
/// separately for each classifier kind.
GridReport grid_search(std::span<const std::vector<std::string>> tokens, std::span<const Label> labels,
                       const GridSpec& spec);

}  // namespace threatwatch::classify
