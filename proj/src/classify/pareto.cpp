#include "threatwatch/classify/pareto.hpp"

#include <cmath>

#include "threatwatch/common/error.hpp"

namespace threatwatch::classify {

bool dominates(const ScoredConfig& a, const ScoredConfig& b) {
  return a.tpr >= b.tpr && a.tnr >= b.tnr && (a.tpr > b.tpr || a.tnr > b.tnr);
}

ParetoSelection pareto_select(std::span<const ScoredConfig> results) {
  if (results.empty()) throw InvalidArgument("no results to select from");
  ParetoSelection out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < results.size() && !dominated; ++j) dominated = dominates(results[j], results[i]);
    if (!dominated) out.dominant.push_back(i);
  }
  auto distance = [&](std::size_t i) { return std::hypot(1.0 - results[i].tpr, 1.0 - results[i].tnr); };
  out.chosen = out.dominant.front();
  for (auto i : out.dominant) {
    const auto& a = results[i];
    const auto& b = results[out.chosen];
    double da = distance(i), db = distance(out.chosen);
    if (da < db || (da == db && (a.tpr > b.tpr || (a.tpr == b.tpr && a.config < b.config)))) out.chosen = i;
  }
  return out;
}

}  // namespace threatwatch::classify
