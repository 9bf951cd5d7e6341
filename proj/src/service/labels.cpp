#include "threatwatch/service/labels.hpp"

#include "threatwatch/common/error.hpp"

namespace threatwatch::service {

std::string_view to_string(LabelSource s) { return s == LabelSource::Analyst ? "analyst" : "bootstrap"; }

LabelSource label_source_from_string(std::string_view s) {
  if (s == "analyst") return LabelSource::Analyst;
  if (s == "bootstrap") return LabelSource::Bootstrap;
  throw InvalidArgument("unknown label source '" + std::string(s) + "'");
}

bool LabelRecord::same_content(const LabelRecord& o) const {
  return post_id == o.post_id && label == o.label && source == o.source && text == o.text && posted_at == o.posted_at;
}

nlohmann::json to_json(const LabelRecord& r) {
  return {{"post_id", r.post_id},
          {"label", r.label == classify::Label::Positive ? "relevant" : "irrelevant"},
          {"labeled_at", format_rfc3339(r.labeled_at)},
          {"source", to_string(r.source)},
          {"text", r.text},
          {"posted_at", format_rfc3339(r.posted_at)}};
}

LabelRecord label_record_from_json(const nlohmann::json& j) {
  try {
    LabelRecord r;
    r.post_id = j.at("post_id").get<std::string>();
    if (r.post_id.empty()) throw ParseError("label record: empty post_id");
    r.label = classify::label_from_string(j.at("label").get<std::string>());
    r.labeled_at = parse_rfc3339(j.at("labeled_at").get<std::string>());
    r.source = label_source_from_string(j.at("source").get<std::string>());
    r.text = j.value("text", std::string());
    if (j.contains("posted_at")) r.posted_at = parse_rfc3339(j["posted_at"].get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("label record: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("label record: ") + e.what());
  }
}

LabelStore::LabelStore(const std::filesystem::path& file) : file_(file) {
  std::ifstream in(file);
  if (!in) return;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      apply(label_record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(file.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void LabelStore::apply(const LabelRecord& r) {
  current_[r.post_id] = r;
  trail_.push_back(r);
}

PutResult LabelStore::put(const LabelRecord& record) {
  if (record.post_id.empty()) throw InvalidArgument("label without post_id");
  auto it = current_.find(record.post_id);
  if (it != current_.end() && it->second.same_content(record)) return PutResult::Unchanged;
  const bool existed = it != current_.end();
  if (file_) {
    if (file_->has_parent_path()) std::filesystem::create_directories(file_->parent_path());
    std::ofstream out(*file_, std::ios::app);
    out << to_json(record).dump() << '\n';
    if (!out) throw Error("cannot append to " + file_->string());
  }
  apply(record);
  return existed ? PutResult::Updated : PutResult::Created;
}

std::optional<LabelRecord> LabelStore::get(const std::string& post_id) const {
  auto it = current_.find(post_id);
  if (it == current_.end()) return std::nullopt;
  return it->second;
}

std::vector<LabelRecord> LabelStore::current() const {
  std::vector<LabelRecord> out;
  for (const auto& [id, r] : current_) out.push_back(r);
  return out;
}

std::vector<LabelRecord> LabelStore::history(const std::string& post_id) const {
  std::vector<LabelRecord> out;
  for (const auto& r : trail_) {
    if (r.post_id == post_id) out.push_back(r);
  }
  return out;
}

}  // namespace threatwatch::service
