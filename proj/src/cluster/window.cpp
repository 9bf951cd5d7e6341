#include "threatwatch/cluster/window.hpp"

#include <algorithm>

namespace threatwatch::cluster {

std::vector<Cluster> expire(ClusterState& state, Timestamp now, Duration theta) {
  std::vector<ClusterId> stale;
  for (const auto& [id, c] : state.clusters()) {
    if (now - c.last_update() > theta) stale.push_back(id);
  }
  std::vector<Cluster> removed;
  for (auto id : stale) removed.push_back(state.remove(id));
  return removed;
}

long duration_days(const Cluster& c) {
  return static_cast<long>((utc_day(c.last_update()) - utc_day(c.created_at())).count());
}

std::map<long, std::size_t> duration_histogram(std::span<const Cluster* const> clusters) {
  std::map<long, std::size_t> out;
  for (const auto* c : clusters) ++out[std::max(1L, duration_days(*c))];
  return out;
}

}  // namespace threatwatch::cluster
