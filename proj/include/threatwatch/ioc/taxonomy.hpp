#pragma once

#include <filesystem>
#include <regex>
#include <set>
#include <string>
#include <vector>

namespace threatwatch::ioc {

/// Tag attached to every generated event.
inline const std::string kOsintTag = "osint:source-type=\"microblog\"";

/// A taxonomy tag and the case-insensitive pattern that triggers it.
class TaxonomyRule {
 public:
  /// Throws InvalidArgument on an empty tag or a pattern that does not compile.
  TaxonomyRule(std::string tag, std::string pattern);

  const std::string& tag() const { return tag_; }
  const std::string& pattern() const { return pattern_; }
  bool matches(const std::string& text) const { return std::regex_search(text, regex_); }

 private:
  std::string tag_;
  std::string pattern_;
  std::regex regex_;
};

using TaxonomyRules = std::vector<TaxonomyRule>;

/// Reads a JSON array of {"tag", "pattern"}. Throws ParseError.
TaxonomyRules load_taxonomy_rules(const std::filesystem::path& path);
TaxonomyRules parse_taxonomy_rules(const std::string& json_text);
const TaxonomyRules& bundled_taxonomy_rules();

/// The OSINT tag plus one tag per rule matching the raw text. Throws
/// InvalidArgument when `rules` is empty.
std::set<std::string> classify_tags(const std::string& text, const TaxonomyRules& rules);

}  // namespace threatwatch::ioc
