#include "oracles.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <map>
#include <regex>

namespace threatwatch::testing {

double brute_wts(const std::vector<WordSet>& members) {
  WordSet shared = members.at(0);
  std::size_t smallest = members[0].size();
  for (std::size_t i = 1; i < members.size(); ++i) {
    WordSet next;
    std::set_intersection(shared.begin(), shared.end(), members[i].begin(), members[i].end(),
                          std::inserter(next, next.end()));
    shared = std::move(next);
    smallest = std::min(smallest, members[i].size());
  }
  return static_cast<double>(shared.size()) / static_cast<double>(smallest);
}

double brute_jaccard(const WordSet& a, const WordSet& b) {
  WordSet inter, uni;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(inter, inter.end()));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(uni, uni.end()));
  if (uni.empty()) return 0.0;
  return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

bool regex_contains_phrase(const std::string& text, const std::string& phrase) {
  std::string escaped;
  for (char c : phrase) {
    if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos) escaped += '\\';
    escaped += c;
  }
  std::regex re("(^|[^A-Za-z0-9])" + escaped + "($|[^A-Za-z0-9])", std::regex::icase);
  return std::regex_search(text, re);
}

double sse_of(const std::vector<std::vector<double>>& points, const std::vector<int>& assignment) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < points.size(); ++i) groups[assignment[i]].push_back(i);
  double total = 0.0;
  for (const auto& [g, idx] : groups) {
    std::vector<double> mean(points[0].size(), 0.0);
    for (auto i : idx)
      for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += points[i][d];
    for (auto& m : mean) m /= static_cast<double>(idx.size());
    for (auto i : idx)
      for (std::size_t d = 0; d < mean.size(); ++d) total += (points[i][d] - mean[d]) * (points[i][d] - mean[d]);
  }
  return total;
}

namespace {

// Restricted growth strings: point i joins an existing group or opens group `used`.
void enumerate(const std::vector<std::vector<double>>& points, int k, std::vector<int>& assignment,
               std::size_t i, int used, double& best) {
  if (i == points.size()) {
    if (used == k) best = std::min(best, sse_of(points, assignment));
    return;
  }
  if (used + static_cast<int>(points.size() - i) < k) return;
  for (int g = 0; g <= std::min(used, k - 1); ++g) {
    assignment[i] = g;
    enumerate(points, k, assignment, i + 1, std::max(used, g + 1), best);
  }
}

}  // namespace

double exhaustive_min_sse(const std::vector<std::vector<double>>& points, int k) {
  std::vector<int> assignment(points.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  enumerate(points, k, assignment, 0, 0, best);
  return best;
}

}  // namespace threatwatch::testing
