#include "threatwatch/cluster/measures.hpp"

#include <algorithm>
#include <iterator>

#include "threatwatch/common/error.hpp"

namespace threatwatch::cluster {

double wts(std::span<const std::vector<std::string>> word_sets) {
  if (word_sets.empty()) throw InvalidArgument("WTS of an empty cluster");
  std::vector<std::string> shared = word_sets.front();
  std::size_t smallest = shared.size();
  for (const auto& s : word_sets) {
    if (s.empty()) throw InvalidArgument("WTS needs non-empty word sets");
    std::vector<std::string> next;
    std::set_intersection(shared.begin(), shared.end(), s.begin(), s.end(), std::back_inserter(next));
    shared = std::move(next);
    smallest = std::min(smallest, s.size());
  }
  return static_cast<double>(shared.size()) / static_cast<double>(smallest);
}

double wts(const Cluster& c) { return c.wts(); }

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t inter = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard(const Cluster& a, const Cluster& b) { return jaccard(a.word_union(), b.word_union()); }

std::optional<double> mean_wts(std::span<const Cluster* const> clusters) {
  if (clusters.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto* c : clusters) sum += c->wts();
  return sum / static_cast<double>(clusters.size());
}

double max_pairwise_jaccard(std::span<const Cluster* const> clusters) {
  double best = 0.0;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) best = std::max(best, jaccard(*clusters[i], *clusters[j]));
  }
  return best;
}

}  // namespace threatwatch::cluster
