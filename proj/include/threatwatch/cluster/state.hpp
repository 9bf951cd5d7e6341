#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "threatwatch/cluster/cluster.hpp"

namespace threatwatch::cluster {

struct ClusteringConfig {
  /// Cohesion threshold on WTS, in (0, 1].
  double tau = 2.0 / 3.0;
  /// Clusters whose last update is more than theta behind the event clock expire.
  Duration theta = days(7);
  int kmeans_max_iterations = 50;
  std::size_t kmeans_min_k = 2;
  std::uint64_t rng_seed = 1;
  /// False gives the no-reclustering variant: the first k-means pass is final.
  bool reclustering = true;

  /// Throws InvalidArgument unless 0 < tau <= 1, theta > 0, iterations >= 1, min_k >= 1.
  void validate() const;
};

nlohmann::json to_json(const ClusteringConfig& c);
/// Missing keys keep defaults; theta is given as "theta_days".
ClusteringConfig clustering_config_from_json(const nlohmann::json& j);

/// wts >= tau, with a 1e-12 allowance so that ratios equal to tau in exact
/// arithmetic pass.
bool meets_threshold(double wts, double tau);

/// The live set of clusters.
class ClusterState {
 public:
  const std::map<ClusterId, Cluster>& clusters() const { return clusters_; }
  std::size_t size() const { return clusters_.size(); }
  bool empty() const { return clusters_.empty(); }
  const Cluster& at(ClusterId id) const;
  bool contains_post(const std::string& post_id) const { return index_.contains(post_id); }
  std::optional<ClusterId> cluster_of(const std::string& post_id) const;
  std::size_t post_count() const { return index_.size(); }

  /// Creates a cluster with a fresh id.
  ClusterId create(std::vector<PostPtr> members);
  /// Inserts a cluster keeping its id; throws if the id or a member is taken.
  void insert(Cluster c);
  void add_to(ClusterId id, PostPtr post);
  Cluster remove(ClusterId id);

  /// Every member, ordered by (timestamp, post_id).
  std::vector<PostPtr> flatten() const;

  ClusterId next_id() const { return next_id_; }
  void set_next_id(ClusterId id) { next_id_ = id; }

  /// Coalescing request for an offline run.
  bool pending_offline = false;
  /// Frozen copy taken at the latest request.
  std::optional<std::vector<Cluster>> saved_snapshot;

 private:
  std::map<ClusterId, Cluster> clusters_;
  std::unordered_map<std::string, ClusterId> index_;
  ClusterId next_id_ = 1;
};

}  // namespace threatwatch::cluster
