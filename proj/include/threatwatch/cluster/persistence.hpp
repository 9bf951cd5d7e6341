#pragma once

#include <json.hpp>

#include "threatwatch/cluster/cluster.hpp"

namespace threatwatch::cluster {

nlohmann::json to_json(const ClusteredPost& p);
PostPtr clustered_post_from_json(const nlohmann::json& j);

/// Cluster summary; members are full posts when `with_posts`, else ids.
nlohmann::json to_json(const Cluster& c, bool with_posts);
/// Expects members as full posts.
Cluster cluster_from_json(const nlohmann::json& j);

}  // namespace threatwatch::cluster
