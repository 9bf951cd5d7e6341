#include "threatwatch/cluster/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/random.hpp"

namespace threatwatch::cluster {
namespace {

using features::FeatureVector;

std::vector<std::size_t> seed_centers(std::span<const FeatureVector> points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<std::size_t> chosen = {rng.index(n)};
  std::vector<bool> taken(n, false);
  taken[chosen[0]] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = points[i].squared_distance(points[chosen[0]]);
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      double r = rng.uniform01() * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || d2[i] == 0.0) continue;
        pick = i;
        r -= d2[i];
        if (r < 0.0) break;
      }
    } else {
      std::size_t r = rng.index(n - chosen.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (r-- == 0) {
          pick = i;
          break;
        }
      }
    }
    chosen.push_back(pick);
    taken[pick] = true;
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], points[i].squared_distance(points[pick]));
  }
  return chosen;
}

double exact_sse(std::span<const FeatureVector> points, const std::vector<std::size_t>& assignment, std::size_t k) {
  const auto dim = points[0].dimension();
  std::vector<std::vector<FeatureVector::Entry>> sums(k);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& s = sums[assignment[i]];
    s.insert(s.end(), points[i].entries().begin(), points[i].entries().end());
    ++counts[assignment[i]];
  }
  std::vector<FeatureVector> means;
  for (std::size_t j = 0; j < k; ++j) {
    for (auto& e : sums[j]) e.second /= static_cast<double>(std::max<std::size_t>(counts[j], 1));
    means.emplace_back(dim, std::move(sums[j]));
  }
  double sse = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sse += points[i].squared_distance(means[assignment[i]]);
    scale += points[i].squared_norm();
  }
  return sse <= 1e-12 * scale ? 0.0 : sse;
}

}  // namespace

KMeansResult kmeans(std::span<const FeatureVector> points, std::size_t k, int max_iterations, std::uint64_t seed) {
  const std::size_t n = points.size();
  if (k < 1 || k > n) throw InvalidArgument("k must be between 1 and the number of points");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  const auto dim = points[0].dimension();
  for (const auto& p : points) {
    if (p.dimension() != dim) throw InvalidArgument("points have mixed dimensions");
  }

  Rng rng(seed);
  std::vector<std::vector<double>> centers(k, std::vector<double>(dim, 0.0));
  std::vector<double> center_norm(k, 0.0);
  {
    auto init = seed_centers(points, k, rng);
    for (std::size_t j = 0; j < k; ++j) {
      points[init[j]].add_to(centers[j]);
      center_norm[j] = points[init[j]].squared_norm();
    }
  }

  KMeansResult result;
  result.k = k;
  std::vector<std::size_t> assignment(n, 0), previous;
  std::vector<double> dist(n, 0.0);
  for (int iter = 1; iter <= max_iterations; ++iter) {
    result.iterations = iter;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      const double x2 = points[i].squared_norm();
      for (std::size_t j = 0; j < k; ++j) {
        double d = std::max(0.0, x2 - 2.0 * points[i].dot(centers[j]) + center_norm[j]);
        if (d < best) {
          best = d;
          arg = j;
        }
      }
      assignment[i] = arg;
      dist[i] = best;
    }

    std::vector<std::size_t> counts(k, 0);
    for (auto a : assignment) ++counts[a];
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assignment[i]] < 2) continue;
        if (far == n || dist[i] > dist[far]) far = i;
      }
      --counts[assignment[far]];
      assignment[far] = j;
      dist[far] = 0.0;
      counts[j] = 1;
    }

    if (assignment == previous) break;
    previous = assignment;

    for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) points[i].add_to(centers[assignment[i]]);
    for (std::size_t j = 0; j < k; ++j) {
      double inv = 1.0 / static_cast<double>(counts[j]), norm = 0.0;
      for (auto& v : centers[j]) {
        v *= inv;
        norm += v * v;
      }
      center_norm[j] = norm;
    }
  }

  result.assignment = std::move(assignment);
  result.sse = exact_sse(points, result.assignment, k);
  return result;
}

AutoKResult kmeans_auto_k(std::span<const FeatureVector> points, std::size_t min_k, int max_iterations,
                          std::uint64_t seed) {
  AutoKResult out;
  const std::size_t n = points.size();
  if (n < 2) {
    out.best.assignment.assign(n, 0);
    out.best.k = n;
    return out;
  }
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t k = std::clamp<std::size_t>(min_k, 1, n);; ++k) {
    auto r = kmeans(points, k, max_iterations, derive_seed(seed, k));
    out.curve.emplace_back(k, r.sse);
    if (!(r.sse < best_sse)) break;
    best_sse = r.sse;
    out.best = std::move(r);
    if (k >= n) break;
  }
  return out;
}

}  // namespace threatwatch::cluster
