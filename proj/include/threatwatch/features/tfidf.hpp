#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "threatwatch/corpus/post.hpp"
#include "threatwatch/features/feature_vector.hpp"
#include "threatwatch/features/hashing.hpp"

namespace threatwatch::features {

inline constexpr std::uint32_t kDefaultDimension = 3000;

/// Hashed TF-IDF weights. idf[b] = ln((doc_count + 1) / (df(b) + 1)) + 1,
/// where df(b) counts documents with at least one token hashed to b.
class TfIdfModel {
 public:
  TfIdfModel() = default;
  TfIdfModel(std::uint32_t dimension, std::uint32_t hash_seed, std::uint64_t doc_count, std::vector<double> idf);

  /// Throws InvalidArgument for an empty corpus or zero dimension.
  static TfIdfModel fit(std::span<const corpus::NormalizedPost> corpus, std::uint32_t dimension = kDefaultDimension,
                        std::uint32_t hash_seed = kDefaultHashSeed);
  static TfIdfModel fit(std::span<const std::vector<std::string>> token_lists,
                        std::uint32_t dimension = kDefaultDimension, std::uint32_t hash_seed = kDefaultHashSeed);

  /// values[b] = (tokens hashed to b) * idf[b]. Raw counts, no normalization.
  FeatureVector transform(std::span<const std::string> tokens) const;
  FeatureVector transform(const corpus::NormalizedPost& post) const { return transform(post.tokens); }

  std::uint32_t dimension() const { return dimension_; }
  std::uint32_t hash_seed() const { return hash_seed_; }
  std::uint64_t doc_count() const { return doc_count_; }
  const std::vector<double>& idf() const { return idf_; }
  bool fitted() const { return doc_count_ > 0; }

  nlohmann::json to_json() const;
  static TfIdfModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static TfIdfModel load(const std::filesystem::path& path);

  bool operator==(const TfIdfModel&) const = default;

 private:
  std::uint32_t dimension_ = 0;
  std::uint32_t hash_seed_ = kDefaultHashSeed;
  std::uint64_t doc_count_ = 0;
  std::vector<double> idf_;
};

}  // namespace threatwatch::features
