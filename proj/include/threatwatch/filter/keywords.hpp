#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "threatwatch/corpus/post.hpp"

namespace threatwatch::filter {

/// Lowercase phrases naming the protected assets, e.g. "internet explorer".
/// Insertion order is kept; duplicates are dropped.
class AssetKeywordSet {
 public:
  /// Throws InvalidArgument when no non-blank phrase is given.
  explicit AssetKeywordSet(const std::vector<std::string>& phrases);
  static AssetKeywordSet load(const std::filesystem::path& path);
  static AssetKeywordSet bundled();

  const std::vector<std::string>& keywords() const { return keywords_; }

 private:
  std::vector<std::string> keywords_;
};

/// Single-word security concepts used by the keyword baseline.
struct SecurityKeywordSet {
  std::set<std::string> keywords;
  double rho = 0.0;

  /// Reads the one-per-line format; a "# rho=<value>" header sets `rho`.
  static SecurityKeywordSet load(const std::filesystem::path& path);
  static SecurityKeywordSet bundled();
  void save(const std::filesystem::path& path) const;
};

/// True iff `phrase` occurs in `lowered_text` bounded on both sides by a
/// non-alphanumeric character or the string edge.
bool contains_phrase(std::string_view lowered_text, std::string_view phrase);

/// Asset phrases mentioned in the post text, in keyword-set order.
std::vector<std::string> matched_assets(std::string_view text, const AssetKeywordSet& assets);

bool asset_filter(const corpus::Post& post, const AssetKeywordSet& assets);
bool asset_filter(std::string_view text, const AssetKeywordSet& assets);

/// asset_filter AND at least one security keyword. Requires a non-empty keyword set.
bool baseline_filter(const corpus::Post& post, const AssetKeywordSet& assets, const SecurityKeywordSet& security);
bool baseline_filter(std::string_view text, const AssetKeywordSet& assets, const SecurityKeywordSet& security);

/// Words whose largest per-document TF-IDF weight over `positives` is below
/// `rho`, minus `exclusions`. Weights use raw term counts and the unsmoothed
/// idf ln((N + 1) / (df + 1)), so a word present in every document weighs 0.
/// Throws InvalidArgument("no training documents") for an empty corpus.
SecurityKeywordSet derive_security_keywords(std::span<const corpus::NormalizedPost> positives, double rho,
                                            const std::set<std::string>& exclusions);

}  // namespace threatwatch::filter
