#pragma once

#include <vector>

#include "threatwatch/cluster/state.hpp"

namespace threatwatch::cluster {

struct Hit {
  ClusterId id;
  double wts;
};

/// Clusters C with wts(C ∪ {post}) >= tau, ordered by WTS descending, then
/// most recent last_update, then lowest id.
std::vector<Hit> membership_hits(const ClusterState& state, const ClusteredPost& post, double tau);

enum class OutcomeKind { NewThreat, Update, NeedsOffline };
std::string_view to_string(OutcomeKind k);

struct IngestOutcome {
  OutcomeKind kind;
  ClusterId cluster;
};

/// No hit: new singleton cluster. One hit: join it. Several: join the first
/// hit, raise pending_offline and save a snapshot (including the post).
/// Throws InvalidArgument if the post id is already in the state.
IngestOutcome online_ingest(ClusterState& state, PostPtr post, const ClusteringConfig& config);

}  // namespace threatwatch::cluster
