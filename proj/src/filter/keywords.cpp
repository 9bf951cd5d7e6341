#include "threatwatch/filter/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/text_io.hpp"

namespace threatwatch::filter {
namespace {

bool is_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

}  // namespace

AssetKeywordSet::AssetKeywordSet(const std::vector<std::string>& phrases) {
  for (const auto& raw : phrases) {
    auto phrase = to_lower_ascii(trim(raw));
    if (phrase.empty()) continue;
    if (std::find(keywords_.begin(), keywords_.end(), phrase) == keywords_.end()) keywords_.push_back(phrase);
  }
  if (keywords_.empty()) throw InvalidArgument("asset keyword set must not be empty");
}

AssetKeywordSet AssetKeywordSet::load(const std::filesystem::path& path) { return AssetKeywordSet(read_word_list(path)); }

AssetKeywordSet AssetKeywordSet::bundled() { return load(bundled_data_dir() / "assets.txt"); }

SecurityKeywordSet SecurityKeywordSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open keyword file " + path.string());
  SecurityKeywordSet out;
  std::string line;
  while (std::getline(in, line)) {
    auto text = trim(line);
    if (text.starts_with("#")) {
      auto pos = text.find("rho=");
      if (pos != std::string::npos) out.rho = std::stod(text.substr(pos + 4));
      continue;
    }
    if (!text.empty()) out.keywords.insert(to_lower_ascii(text));
  }
  return out;
}

SecurityKeywordSet SecurityKeywordSet::bundled() { return load(bundled_data_dir() / "security_keywords.txt"); }

void SecurityKeywordSet::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "# Security concept keywords for the naive keyword baseline.\n";
  out << "# rho=" << rho << "\n";
  for (const auto& w : keywords) out << w << "\n";
  write_file_atomic(path, out.str());
}

bool contains_phrase(std::string_view lowered_text, std::string_view phrase) {
  if (phrase.empty()) return false;
  for (std::size_t pos = lowered_text.find(phrase); pos != std::string_view::npos;
       pos = lowered_text.find(phrase, pos + 1)) {
    bool left = pos == 0 || !is_alnum(lowered_text[pos - 1]);
    std::size_t end = pos + phrase.size();
    bool right = end == lowered_text.size() || !is_alnum(lowered_text[end]);
    if (left && right) return true;
  }
  return false;
}

std::vector<std::string> matched_assets(std::string_view text, const AssetKeywordSet& assets) {
  auto lowered = to_lower_ascii(text);
  std::vector<std::string> out;
  for (const auto& phrase : assets.keywords()) {
    if (contains_phrase(lowered, phrase)) out.push_back(phrase);
  }
  return out;
}

bool asset_filter(std::string_view text, const AssetKeywordSet& assets) {
  auto lowered = to_lower_ascii(text);
  return std::any_of(assets.keywords().begin(), assets.keywords().end(),
                     [&](const std::string& phrase) { return contains_phrase(lowered, phrase); });
}

bool asset_filter(const corpus::Post& post, const AssetKeywordSet& assets) { return asset_filter(post.text, assets); }

bool baseline_filter(std::string_view text, const AssetKeywordSet& assets, const SecurityKeywordSet& security) {
  if (security.keywords.empty()) throw InvalidArgument("baseline filter needs at least one security keyword");
  if (!asset_filter(text, assets)) return false;
  auto lowered = to_lower_ascii(text);
  return std::any_of(security.keywords.begin(), security.keywords.end(),
                     [&](const std::string& word) { return contains_phrase(lowered, word); });
}

bool baseline_filter(const corpus::Post& post, const AssetKeywordSet& assets, const SecurityKeywordSet& security) {
  return baseline_filter(post.text, assets, security);
}

SecurityKeywordSet derive_security_keywords(std::span<const corpus::NormalizedPost> positives, double rho,
                                            const std::set<std::string>& exclusions) {
  if (positives.empty()) throw InvalidArgument("no training documents");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : positives) {
    for (const auto& w : doc.token_set) ++df[w];
  }
  const double n = static_cast<double>(positives.size());
  std::map<std::string, double> max_weight;
  for (const auto& doc : positives) {
    std::map<std::string, std::size_t> tf;
    for (const auto& w : doc.tokens) ++tf[w];
    for (const auto& [w, count] : tf) {
      double idf = std::log((n + 1.0) / (static_cast<double>(df[w]) + 1.0));
      double weight = static_cast<double>(count) * idf;
      auto [it, inserted] = max_weight.emplace(w, weight);
      if (!inserted) it->second = std::max(it->second, weight);
    }
  }
  SecurityKeywordSet out;
  out.rho = rho;
  for (const auto& [w, weight] : max_weight) {
    if (weight < rho && !exclusions.contains(w)) out.keywords.insert(w);
  }
  return out;
}

}  // namespace threatwatch::filter
