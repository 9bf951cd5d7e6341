#pragma once

#include <span>
#include <vector>

#include "threatwatch/cluster/state.hpp"

namespace threatwatch::cluster {

struct OfflineResult {
  /// Final groups, each ordered by (timestamp, post_id); groups ordered by
  /// their first member.
  std::vector<std::vector<PostPtr>> groups;
  /// k chosen by the elbow search in each round.
  std::vector<std::size_t> k_per_round;
};

/// Re-clusters the given posts. Each round runs the elbow k-means on the
/// remaining posts (seed derived from config.rng_seed and the round) and
/// finalizes every group with WTS >= tau; the rest go into the next round.
/// A round that finalizes nothing keeps raising k until some group
/// qualifies, falling back to singletons. With config.reclustering off,
/// the first round's groups are all final.
OfflineResult offline_clustering(std::span<const PostPtr> posts, const ClusteringConfig& config);
OfflineResult offline_clustering(const std::vector<Cluster>& snapshot, const ClusteringConfig& config);

struct MergeReport {
  std::vector<std::pair<ClusterId, std::size_t>> kept_ids;  // (id, size)
  std::size_t reingested = 0;
  std::size_t dropped = 0;
};

/// Builds the state that replaces `live` after an offline run over
/// `snapshot`. Posts no longer live are dropped from the groups. Each group
/// reuses the id of the unclaimed live cluster it overlaps most (ties to
/// the lower id), otherwise a fresh id. Live posts missing from the
/// snapshot are then re-ingested in (timestamp, post_id) order with the
/// online rule. pending_offline carries over from `live` and is raised by
/// any multi-hit re-ingestion; a raised flag comes with a fresh snapshot.
ClusterState merge_cluster_state(const OfflineResult& s_star, const ClusterState& live,
                                 const std::vector<Cluster>& snapshot, const ClusteringConfig& config,
                                 MergeReport* report = nullptr);

}  // namespace threatwatch::cluster
