#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

namespace threatwatch::features {

/// Fixed-dimension non-negative vector. Stored sparsely: `entries` holds the
/// non-zero components sorted by index. Absent indices are zero, so the
/// dense view is the zero-padded vector of length `dimension`.
class FeatureVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  FeatureVector() = default;
  explicit FeatureVector(std::uint32_t dimension) : dimension_(dimension) {}
  /// Entries may be unsorted and repeat indices (repeats are summed); zeros are dropped.
  FeatureVector(std::uint32_t dimension, std::vector<Entry> entries);

  static FeatureVector from_dense(std::span<const double> values);

  std::uint32_t dimension() const { return dimension_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  double operator[](std::uint32_t index) const;
  std::vector<double> dense() const;

  double dot(std::span<const double> dense) const;
  double squared_norm() const;
  /// Squared Euclidean distance to a dense point of the same dimension.
  double squared_distance(std::span<const double> dense, double dense_squared_norm) const;
  double squared_distance(const FeatureVector& other) const;
  /// dense += scale * this
  void add_to(std::span<double> dense, double scale = 1.0) const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::uint32_t dimension_ = 0;
  std::vector<Entry> entries_;
};

/// {"dim": n, "idx": [...], "val": [...]}
nlohmann::json to_json(const FeatureVector& v);
FeatureVector feature_vector_from_json(const nlohmann::json& j);

}  // namespace threatwatch::features
