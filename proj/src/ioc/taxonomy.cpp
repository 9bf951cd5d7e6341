#include "threatwatch/ioc/taxonomy.hpp"

#include <json.hpp>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/text_io.hpp"

namespace threatwatch::ioc {

TaxonomyRule::TaxonomyRule(std::string tag, std::string pattern) : tag_(std::move(tag)), pattern_(std::move(pattern)) {
  if (tag_.empty()) throw InvalidArgument("taxonomy rule with empty tag");
  try {
    regex_ = std::regex(pattern_, std::regex::ECMAScript | std::regex::icase);
  } catch (const std::regex_error& e) {
    throw InvalidArgument("taxonomy rule " + tag_ + ": bad pattern: " + e.what());
  }
}

TaxonomyRules parse_taxonomy_rules(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("taxonomy rules: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("taxonomy rules must be a JSON array");
  TaxonomyRules rules;
  for (const auto& r : j) {
    if (!r.is_object() || !r.contains("tag") || !r.contains("pattern") || !r["tag"].is_string() ||
        !r["pattern"].is_string())
      throw ParseError("taxonomy rule needs string fields tag and pattern");
    rules.emplace_back(r["tag"].get<std::string>(), r["pattern"].get<std::string>());
  }
  return rules;
}

TaxonomyRules load_taxonomy_rules(const std::filesystem::path& path) { return parse_taxonomy_rules(read_file(path)); }

const TaxonomyRules& bundled_taxonomy_rules() {
  static const TaxonomyRules rules = load_taxonomy_rules(bundled_data_dir() / "taxonomy_rules.json");
  return rules;
}

std::set<std::string> classify_tags(const std::string& text, const TaxonomyRules& rules) {
  if (rules.empty()) throw InvalidArgument("no taxonomy rules");
  std::set<std::string> tags = {kOsintTag};
  for (const auto& rule : rules) {
    if (rule.matches(text)) tags.insert(rule.tag());
  }
  return tags;
}

}  // namespace threatwatch::ioc
