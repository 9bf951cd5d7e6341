#pragma once

#include <functional>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "threatwatch/common/time.hpp"

namespace threatwatch::corpus {

/// A raw short text item as collected from a source account.
struct Post {
  std::string id;
  std::string author;
  Timestamp timestamp{};
  std::string text;

  bool operator==(const Post&) const = default;
};

/// A post after normalization. `tokens` keeps order and repeats; `token_set`
/// is the sorted distinct view used by the cohesion measures.
struct NormalizedPost {
  std::string post_id;
  std::vector<std::string> tokens;
  std::vector<std::string> token_set;
  std::string original_text;

  /// Posts with no surviving tokens are excluded from every later stage.
  bool dropped() const { return tokens.empty(); }
};

nlohmann::json to_json(const Post& post);
/// Expects keys id, author, timestamp (RFC 3339) and text. Throws ParseError.
Post post_from_json(const nlohmann::json& j);

struct JsonlError {
  std::size_t line_number;
  std::string message;
};

/// Reads one post per line. Blank lines are skipped; malformed lines are
/// reported through `on_error` and never abort the read.
void read_posts_jsonl(std::istream& in, const std::function<void(Post)>& on_post,
                      const std::function<void(const JsonlError&)>& on_error);

std::vector<Post> read_posts_jsonl_file(const std::string& path);

}  // namespace threatwatch::corpus
