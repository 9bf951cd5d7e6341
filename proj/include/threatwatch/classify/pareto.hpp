#pragma once

#include <span>
#include <string>
#include <vector>

namespace threatwatch::classify {

struct ScoredConfig {
  std::string config;
  double tpr = 0.0;
  double tnr = 0.0;
};

/// True iff a is at least as good as b on both rates and better on one.
bool dominates(const ScoredConfig& a, const ScoredConfig& b);

struct ParetoSelection {
  /// Indices into the input of the non-dominated configurations, ascending.
  std::vector<std::size_t> dominant;
  /// The dominant configuration closest to (TPR, TNR) = (1, 1); ties go to
  /// higher TPR, then the lexicographically smaller config string.
  std::size_t chosen = 0;
};

/// Throws InvalidArgument on empty input.
ParetoSelection pareto_select(std::span<const ScoredConfig> results);

}  // namespace threatwatch::classify
