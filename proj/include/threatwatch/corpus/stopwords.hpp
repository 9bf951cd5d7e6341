#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace threatwatch::corpus {

/// A set of lowercase words removed during normalization.
class StopwordList {
 public:
  StopwordList() = default;
  /// Entries are lowercased on construction.
  explicit StopwordList(const std::vector<std::string>& words);

  /// One word per line, '#' starts a comment.
  static StopwordList load(const std::filesystem::path& path);
  /// The versioned English list shipped in data/stopwords.txt.
  static StopwordList bundled();

  bool contains(std::string_view word) const { return words_.find(word) != words_.end(); }
  std::size_t size() const { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const { return words_; }

 private:
  std::set<std::string, std::less<>> words_;
};

}  // namespace threatwatch::corpus
