#include "threatwatch/features/tfidf.hpp"

#include <algorithm>
#include <cmath>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/text_io.hpp"

namespace threatwatch::features {
namespace {

constexpr int kFormatVersion = 1;

}  // namespace

TfIdfModel::TfIdfModel(std::uint32_t dimension, std::uint32_t hash_seed, std::uint64_t doc_count,
                       std::vector<double> idf)
    : dimension_(dimension), hash_seed_(hash_seed), doc_count_(doc_count), idf_(std::move(idf)) {
  if (dimension_ == 0) throw InvalidArgument("dimension must be positive");
  if (idf_.size() != dimension_) throw InvalidArgument("idf length must equal dimension");
  for (double w : idf_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("idf weights must be finite and non-negative");
  }
}

TfIdfModel TfIdfModel::fit(std::span<const std::vector<std::string>> token_lists, std::uint32_t dimension,
                           std::uint32_t hash_seed) {
  if (token_lists.empty()) throw InvalidArgument("cannot fit TF-IDF on an empty corpus");
  if (dimension == 0) throw InvalidArgument("dimension must be positive");
  std::vector<std::uint64_t> df(dimension, 0);
  std::vector<std::uint32_t> buckets;
  for (const auto& tokens : token_lists) {
    buckets.clear();
    for (const auto& t : tokens) buckets.push_back(hash_token(t, dimension, hash_seed));
    std::sort(buckets.begin(), buckets.end());
    buckets.erase(std::unique(buckets.begin(), buckets.end()), buckets.end());
    for (auto b : buckets) ++df[b];
  }
  const double n = static_cast<double>(token_lists.size());
  std::vector<double> idf(dimension);
  for (std::uint32_t b = 0; b < dimension; ++b) idf[b] = std::log((n + 1.0) / (static_cast<double>(df[b]) + 1.0)) + 1.0;
  return TfIdfModel(dimension, hash_seed, token_lists.size(), std::move(idf));
}

TfIdfModel TfIdfModel::fit(std::span<const corpus::NormalizedPost> corpus, std::uint32_t dimension,
                           std::uint32_t hash_seed) {
  std::vector<std::vector<std::string>> lists;
  lists.reserve(corpus.size());
  for (const auto& p : corpus) lists.push_back(p.tokens);
  return fit(std::span<const std::vector<std::string>>(lists), dimension, hash_seed);
}

FeatureVector TfIdfModel::transform(std::span<const std::string> tokens) const {
  if (!fitted()) throw InvalidArgument("TF-IDF model is not fitted");
  std::vector<FeatureVector::Entry> entries;
  entries.reserve(tokens.size());
  for (const auto& t : tokens) entries.emplace_back(hash_token(t, dimension_, hash_seed_), 1.0);
  FeatureVector counts(dimension_, std::move(entries));
  std::vector<FeatureVector::Entry> weighted;
  weighted.reserve(counts.nnz());
  for (const auto& [b, tf] : counts.entries()) weighted.emplace_back(b, tf * idf_[b]);
  return FeatureVector(dimension_, std::move(weighted));
}

nlohmann::json TfIdfModel::to_json() const {
  return {{"format", "tfidf"},
          {"version", kFormatVersion},
          {"dimension", dimension_},
          {"hash_seed", hash_seed_},
          {"doc_count", doc_count_},
          {"idf", idf_}};
}

TfIdfModel TfIdfModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "tfidf") throw ParseError("not a TF-IDF model file");
    if (j.at("version").get<int>() != kFormatVersion) throw ParseError("unsupported TF-IDF model version");
    return TfIdfModel(j.at("dimension").get<std::uint32_t>(), j.at("hash_seed").get<std::uint32_t>(),
                      j.at("doc_count").get<std::uint64_t>(), j.at("idf").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad TF-IDF model: ") + e.what());
  }
}

void TfIdfModel::save(const std::filesystem::path& path) const { write_file_atomic(path, to_json().dump()); }

TfIdfModel TfIdfModel::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace threatwatch::features
