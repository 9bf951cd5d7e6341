#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "threatwatch/classify/example.hpp"
#include "threatwatch/cluster/engine.hpp"
#include "threatwatch/corpus/post.hpp"
#include "threatwatch/features/feature_vector.hpp"

namespace threatwatch::service {

/// How far a post got through the pipeline.
enum class Stage {
  /// Nothing left after normalization.
  Dropped,
  /// Mentions none of the asset keywords.
  FilteredOut,
  Irrelevant,
  Relevant,
};

std::string_view to_string(Stage s);
Stage stage_from_string(std::string_view s);

/// Written once at the start of every log; replays take their clustering
/// settings from here.
struct StartRecord {
  cluster::ClusteringConfig clustering;
  cluster::EngineOptions engine;
  bool operator==(const StartRecord&) const = default;
};

struct PostRecord {
  corpus::Post post;
  Stage stage = Stage::Dropped;
  std::vector<std::string> assets;
  /// Selected by the keyword baseline (asset and security keyword).
  bool baseline = false;
  std::vector<std::string> tokens;
  /// Present for posts that reached the classifier.
  std::optional<double> score;
  /// Present for relevant posts.
  std::optional<features::FeatureVector> vector;
  std::optional<cluster::OutcomeKind> outcome;
  std::optional<cluster::ClusterId> cluster;
  int model_version = 0;

  bool operator==(const PostRecord&) const = default;
};

struct MergeRecord {
  Timestamp at{};
  std::vector<cluster::ClusterMembership> clusters;
  bool pending_offline = false;
  bool operator==(const MergeRecord&) const;
};

struct ExpireRecord {
  Timestamp at{};
  std::vector<cluster::ClusterId> clusters;
  bool operator==(const ExpireRecord&) const = default;
};

struct ModelRecord {
  int version = 0;
  std::string description;
  std::size_t examples = 0;
  bool operator==(const ModelRecord&) const = default;
};

using LogEvent = std::variant<StartRecord, PostRecord, MergeRecord, ExpireRecord, ModelRecord>;

nlohmann::json to_json(const LogEvent& e);
/// Throws ParseError.
LogEvent log_event_from_json(const nlohmann::json& j);

/// Append-only JSONL writer; every event is flushed as one line.
class EventLogWriter {
 public:
  /// Creates parent directories. `truncate` starts a fresh log.
  EventLogWriter(const std::filesystem::path& path, bool truncate);
  void append(const LogEvent& e);

 private:
  std::ofstream out_;
};

/// Malformed lines go to `on_error` with their line number; reading goes on.
void read_event_log(const std::filesystem::path& path, const std::function<void(LogEvent)>& on_event,
                    const std::function<void(std::size_t, const std::string&)>& on_error = {});

struct ReplayHooks {
  /// Before a post record is applied, with the engine as it stands.
  std::function<void(const PostRecord&, const cluster::ClusterEngine&)> before_post;
  std::function<void(const PostRecord&)> after_post;
  std::function<void(const ModelRecord&)> on_model;
};

/// Rebuilds the engine from a log: relevant posts are re-ingested and
/// recorded merges re-applied, so no offline run is repeated. The engine is
/// left in manual offline mode. Throws ParseError on a malformed line and
/// InvalidArgument when the log is inconsistent.
std::unique_ptr<cluster::ClusterEngine> replay_cluster_state(const std::filesystem::path& path,
                                                             const ReplayHooks& hooks = {});

}  // namespace threatwatch::service
