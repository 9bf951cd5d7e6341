#pragma once

#include <map>
#include <vector>

#include "threatwatch/cluster/state.hpp"

namespace threatwatch::cluster {

/// Removes every cluster with now − last_update > theta, whole, and returns
/// the removed clusters in id order.
std::vector<Cluster> expire(ClusterState& state, Timestamp now, Duration theta);

/// Whole UTC calendar days between creation and the last update.
long duration_days(const Cluster& c);

/// duration bucket -> cluster count; durations under one day count as 1.
std::map<long, std::size_t> duration_histogram(std::span<const Cluster* const> clusters);

}  // namespace threatwatch::cluster
