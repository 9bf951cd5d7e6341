#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "threatwatch/features/feature_vector.hpp"

namespace threatwatch::cluster {

struct KMeansResult {
  /// Cluster index in [0, k) per point.
  std::vector<std::size_t> assignment;
  std::size_t k = 0;
  /// Sum of squared Euclidean distances to the group means.
  double sse = 0.0;
  int iterations = 0;
};

/// Lloyd's algorithm. Initial centers are k distinct points drawn with
/// D²-weighted seeded sampling (uniform among the unchosen points once every
/// point coincides with a center). Assignment ties go to the lower center
/// index. A center left without points takes the point farthest from its
/// own center among groups with at least two points. Stops when the
/// assignment repeats or after max_iterations.
///
/// The reported SSE is recomputed from exact differences to the final group
/// means; totals below 1e-12 of the summed squared norms are reported as 0.
/// Throws InvalidArgument unless 1 <= k <= |points|.
KMeansResult kmeans(std::span<const features::FeatureVector> points, std::size_t k, int max_iterations,
                    std::uint64_t seed);

struct AutoKResult {
  KMeansResult best;
  /// (k, SSE) for every evaluated k, in order.
  std::vector<std::pair<std::size_t, double>> curve;
};

/// Elbow search: k starts at min_k; each k gets one run seeded with
/// derive_seed(seed, k). Continues while the SSE strictly decreases and
/// k < |points|; returns the lowest-SSE run. Fewer than two points give a
/// single group without running k-means.
AutoKResult kmeans_auto_k(std::span<const features::FeatureVector> points, std::size_t min_k, int max_iterations,
                          std::uint64_t seed);

}  // namespace threatwatch::cluster
