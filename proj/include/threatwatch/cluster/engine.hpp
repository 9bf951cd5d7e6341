#pragma once

#include <functional>
#include <future>
#include <optional>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "threatwatch/cluster/offline.hpp"
#include "threatwatch/cluster/online.hpp"
#include "threatwatch/cluster/window.hpp"

namespace threatwatch::cluster {

enum class OfflineMode {
  /// Run synchronously once `offline_batch` posts have arrived since the
  /// request. Deterministic; used for file replay and evaluation.
  Batch,
  /// Run on a worker thread; the result is merged on the next ingest.
  Background,
  /// Only when run_offline() is called.
  Manual,
};

struct EngineOptions {
  OfflineMode mode = OfflineMode::Batch;
  std::size_t offline_batch = 25;
};

/// Membership of one cluster by post id, as recorded in logs.
struct ClusterMembership {
  ClusterId id;
  std::vector<std::string> post_ids;
};

struct EngineListener {
  std::function<void(const ClusteredPost&, const IngestOutcome&)> on_ingest;
  std::function<void(Timestamp now, const std::vector<Cluster>& removed)> on_expire;
  std::function<void(const ClusterState& merged, const OfflineResult&, const MergeReport&)> on_merge;
};

/// Single-writer owner of the live state and the archive of expired
/// clusters. The event clock is the largest post timestamp seen; expiry is
/// applied before each post is placed, so an expired topic is never revived.
class ClusterEngine {
 public:
  explicit ClusterEngine(ClusteringConfig config, EngineOptions options = {});
  ~ClusterEngine();
  ClusterEngine(const ClusterEngine&) = delete;
  ClusterEngine& operator=(const ClusterEngine&) = delete;

  /// Throws InvalidArgument for a post id seen before (live or archived).
  IngestOutcome ingest(PostPtr post);
  /// Moves the clock forward (never back) and expires stale clusters.
  std::vector<ClusterId> advance_clock(Timestamp now);
  /// Runs a pending offline request now, waiting for any background run.
  /// Returns false if nothing was pending.
  bool run_offline();
  /// Waits for a background run and merges it.
  void drain();

  /// Replaces the live state with the given memberships (replay of a logged
  /// merge). Every post id must be live.
  void apply_merge(const std::vector<ClusterMembership>& clusters, bool pending_offline);

  const ClusterState& state() const { return state_; }
  const std::vector<Cluster>& archive() const { return archive_; }
  std::optional<Timestamp> clock() const { return clock_; }
  const ClusteringConfig& config() const { return config_; }
  const EngineOptions& options() const { return options_; }
  std::size_t ingested() const { return seen_.size(); }
  bool seen(const std::string& post_id) const { return seen_.contains(post_id); }

  EngineListener listener;

  /// Full deterministic snapshot: config, clock, live clusters with their
  /// posts, archive and offline bookkeeping.
  nlohmann::json snapshot() const;
  static std::unique_ptr<ClusterEngine> restore(const nlohmann::json& snapshot, EngineOptions options = {});

 private:
  void maybe_schedule();
  void merge(const OfflineResult& result, const std::vector<Cluster>& snapshot);
  void poll_background(bool wait);

  ClusteringConfig config_;
  EngineOptions options_;
  ClusterState state_;
  std::vector<Cluster> archive_;
  std::optional<Timestamp> clock_;
  std::unordered_set<std::string> seen_;
  std::size_t since_request_ = 0;
  std::optional<std::future<OfflineResult>> inflight_;
  std::vector<Cluster> inflight_snapshot_;
};

}  // namespace threatwatch::cluster
