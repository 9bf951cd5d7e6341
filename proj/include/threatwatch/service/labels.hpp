#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "threatwatch/classify/example.hpp"
#include "threatwatch/common/time.hpp"
#include "threatwatch/corpus/post.hpp"

namespace threatwatch::service {

enum class LabelSource { Analyst, Bootstrap };

std::string_view to_string(LabelSource s);
LabelSource label_source_from_string(std::string_view s);

struct LabelRecord {
  std::string post_id;
  classify::Label label = classify::Label::Negative;
  Timestamp labeled_at{};
  LabelSource source = LabelSource::Analyst;
  /// The labeled post's text and time, kept so retraining does not depend on
  /// the event log.
  std::string text;
  Timestamp posted_at{};

  /// Same post, label, source and text; the labeling time is ignored.
  bool same_content(const LabelRecord& o) const;
  bool operator==(const LabelRecord&) const = default;
};

nlohmann::json to_json(const LabelRecord& r);
/// Throws ParseError.
LabelRecord label_record_from_json(const nlohmann::json& j);

enum class PutResult {
  Created,
  Updated,
  /// Identical to the current label; nothing was written.
  Unchanged,
};

/// Current label per post (last write wins) over an append-only audit
/// trail. With a file, the trail is loaded on construction and every
/// accepted write is appended.
class LabelStore {
 public:
  LabelStore() = default;
  explicit LabelStore(const std::filesystem::path& file);

  PutResult put(const LabelRecord& record);
  std::optional<LabelRecord> get(const std::string& post_id) const;
  /// Current labels ordered by post id.
  std::vector<LabelRecord> current() const;
  /// Every accepted write for the post, oldest first.
  std::vector<LabelRecord> history(const std::string& post_id) const;
  std::size_t size() const { return current_.size(); }
  /// Number of accepted writes.
  std::size_t trail_size() const { return trail_.size(); }

 private:
  void apply(const LabelRecord& r);

  std::map<std::string, LabelRecord> current_;
  std::vector<LabelRecord> trail_;
  std::optional<std::filesystem::path> file_;
};

}  // namespace threatwatch::service
