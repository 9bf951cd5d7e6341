#include "threatwatch/cluster/offline.hpp"

#include <algorithm>
#include <unordered_set>

#include "threatwatch/cluster/kmeans.hpp"
#include "threatwatch/cluster/measures.hpp"
#include "threatwatch/cluster/online.hpp"
#include "threatwatch/common/random.hpp"

namespace threatwatch::cluster {
namespace {

std::vector<std::vector<PostPtr>> group(std::span<const PostPtr> posts, const KMeansResult& r) {
  std::vector<std::vector<PostPtr>> groups(r.k);
  for (std::size_t i = 0; i < posts.size(); ++i) groups[r.assignment[i]].push_back(posts[i]);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

bool cohesive(const std::vector<PostPtr>& g, double tau) {
  std::vector<std::vector<std::string>> sets;
  for (const auto& p : g) sets.push_back(p->token_set);
  return meets_threshold(wts(sets), tau);
}

bool by_time(const PostPtr& a, const PostPtr& b) { return earlier(*a, *b); }

}  // namespace

OfflineResult offline_clustering(std::span<const PostPtr> input, const ClusteringConfig& config) {
  OfflineResult out;
  std::vector<PostPtr> remaining(input.begin(), input.end());
  std::sort(remaining.begin(), remaining.end(), by_time);

  for (std::uint64_t round = 0; !remaining.empty(); ++round) {
    if (remaining.size() == 1) {
      out.groups.push_back(remaining);
      out.k_per_round.push_back(1);
      break;
    }
    std::vector<features::FeatureVector> points;
    for (const auto& p : remaining) points.push_back(p->vector);
    const auto seed = derive_seed(config.rng_seed, round);
    auto elbow = kmeans_auto_k(points, config.kmeans_min_k, config.kmeans_max_iterations, seed);
    out.k_per_round.push_back(elbow.best.k);
    auto groups = group(remaining, elbow.best);
    if (!config.reclustering) {
      out.groups.insert(out.groups.end(), groups.begin(), groups.end());
      break;
    }

    auto accepted = [&](const std::vector<std::vector<PostPtr>>& gs) {
      return std::any_of(gs.begin(), gs.end(), [&](const auto& g) { return cohesive(g, config.tau); });
    };
    for (std::size_t k = elbow.best.k + 1; !accepted(groups) && k <= remaining.size(); ++k) {
      groups = group(remaining, kmeans(points, k, config.kmeans_max_iterations, derive_seed(seed, k)));
    }
    if (!accepted(groups)) {
      groups.clear();
      for (const auto& p : remaining) groups.push_back({p});
    }

    std::unordered_set<const ClusteredPost*> done;
    for (auto& g : groups) {
      if (!cohesive(g, config.tau)) continue;
      for (const auto& p : g) done.insert(p.get());
      out.groups.push_back(std::move(g));
    }
    std::erase_if(remaining, [&](const PostPtr& p) { return done.contains(p.get()); });
  }

  for (auto& g : out.groups) std::sort(g.begin(), g.end(), by_time);
  std::sort(out.groups.begin(), out.groups.end(), [](const auto& a, const auto& b) { return by_time(a[0], b[0]); });
  return out;
}

OfflineResult offline_clustering(const std::vector<Cluster>& snapshot, const ClusteringConfig& config) {
  std::vector<PostPtr> posts;
  for (const auto& c : snapshot) posts.insert(posts.end(), c.members().begin(), c.members().end());
  return offline_clustering(posts, config);
}

ClusterState merge_cluster_state(const OfflineResult& s_star, const ClusterState& live,
                                 const std::vector<Cluster>& snapshot, const ClusteringConfig& config,
                                 MergeReport* report) {
  MergeReport local;
  MergeReport& rep = report ? *report : local;

  ClusterState merged;
  merged.set_next_id(live.next_id());
  std::unordered_set<ClusterId> claimed;
  for (const auto& g : s_star.groups) {
    std::vector<PostPtr> members;
    std::map<ClusterId, std::size_t> overlap;
    for (const auto& p : g) {
      auto where = live.cluster_of(p->post_id);
      if (!where) {
        ++rep.dropped;
        continue;
      }
      members.push_back(p);
      ++overlap[*where];
    }
    if (members.empty()) continue;
    std::optional<ClusterId> reuse;
    std::size_t best = 0;
    for (const auto& [id, count] : overlap) {
      if (!claimed.contains(id) && count > best) {
        best = count;
        reuse = id;
      }
    }
    if (reuse) {
      claimed.insert(*reuse);
      merged.insert(Cluster(*reuse, std::move(members)));
      rep.kept_ids.emplace_back(*reuse, merged.at(*reuse).size());
    } else {
      merged.create(std::move(members));
    }
  }

  std::unordered_set<std::string> in_snapshot;
  for (const auto& c : snapshot) {
    for (const auto& m : c.members()) in_snapshot.insert(m->post_id);
  }
  merged.pending_offline = live.pending_offline;
  for (const auto& p : live.flatten()) {
    if (in_snapshot.contains(p->post_id)) continue;
    online_ingest(merged, p, config);
    ++rep.reingested;
  }
  if (merged.pending_offline) {
    std::vector<Cluster> snap;
    for (const auto& [id, c] : merged.clusters()) snap.push_back(c);
    merged.saved_snapshot = std::move(snap);
  } else {
    merged.saved_snapshot.reset();
  }
  return merged;
}

}  // namespace threatwatch::cluster
