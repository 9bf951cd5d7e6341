#include "threatwatch/cluster/engine.hpp"

#include <unordered_map>

#include "threatwatch/common/error.hpp"

namespace threatwatch::cluster {

ClusterEngine::ClusterEngine(ClusteringConfig config, EngineOptions options)
    : config_(std::move(config)), options_(options) {
  config_.validate();
  if (options_.offline_batch == 0) options_.offline_batch = 1;
}

ClusterEngine::~ClusterEngine() {
  if (inflight_) inflight_->wait();
}

std::vector<ClusterId> ClusterEngine::advance_clock(Timestamp now) {
  if (clock_ && now <= *clock_) now = *clock_;
  clock_ = now;
  auto removed = expire(state_, now, config_.theta);
  std::vector<ClusterId> ids;
  for (const auto& c : removed) ids.push_back(c.id());
  if (!removed.empty()) {
    if (listener.on_expire) listener.on_expire(now, removed);
    archive_.insert(archive_.end(), std::make_move_iterator(removed.begin()), std::make_move_iterator(removed.end()));
  }
  return ids;
}

IngestOutcome ClusterEngine::ingest(PostPtr post) {
  if (seen_.contains(post->post_id)) throw InvalidArgument("duplicate post id " + post->post_id);
  poll_background(false);
  advance_clock(post->timestamp);
  const bool was_pending = state_.pending_offline;
  auto outcome = online_ingest(state_, post, config_);
  seen_.insert(post->post_id);
  if (listener.on_ingest) listener.on_ingest(*post, outcome);
  if (state_.pending_offline) {
    if (was_pending) {
      ++since_request_;
    } else {
      since_request_ = 1;
    }
  }
  maybe_schedule();
  return outcome;
}

void ClusterEngine::maybe_schedule() {
  if (!state_.pending_offline || !state_.saved_snapshot) return;
  switch (options_.mode) {
    case OfflineMode::Manual:
      return;
    case OfflineMode::Batch:
      if (since_request_ >= options_.offline_batch) run_offline();
      return;
    case OfflineMode::Background:
      if (inflight_) return;
      inflight_snapshot_ = std::move(*state_.saved_snapshot);
      state_.saved_snapshot.reset();
      state_.pending_offline = false;
      since_request_ = 0;
      inflight_ = std::async(std::launch::async, [snap = inflight_snapshot_, cfg = config_] {
        return offline_clustering(snap, cfg);
      });
      return;
  }
}

void ClusterEngine::poll_background(bool wait) {
  if (!inflight_) return;
  if (!wait && inflight_->wait_for(std::chrono::seconds(0)) != std::future_status::ready) return;
  auto result = inflight_->get();
  inflight_.reset();
  merge(result, inflight_snapshot_);
  inflight_snapshot_.clear();
}

void ClusterEngine::drain() { poll_background(true); }

bool ClusterEngine::run_offline() {
  poll_background(true);
  if (!state_.pending_offline || !state_.saved_snapshot) return false;
  auto snapshot = std::move(*state_.saved_snapshot);
  state_.saved_snapshot.reset();
  state_.pending_offline = false;
  since_request_ = 0;
  auto result = offline_clustering(snapshot, config_);
  merge(result, snapshot);
  return true;
}

void ClusterEngine::merge(const OfflineResult& result, const std::vector<Cluster>& snapshot) {
  MergeReport report;
  state_ = merge_cluster_state(result, state_, snapshot, config_, &report);
  if (state_.pending_offline) since_request_ = 0;
  if (listener.on_merge) listener.on_merge(state_, result, report);
}

void ClusterEngine::apply_merge(const std::vector<ClusterMembership>& clusters, bool pending_offline) {
  std::unordered_map<std::string, PostPtr> live;
  for (const auto& p : state_.flatten()) live.emplace(p->post_id, p);
  ClusterState next;
  next.set_next_id(state_.next_id());
  for (const auto& m : clusters) {
    std::vector<PostPtr> members;
    for (const auto& id : m.post_ids) {
      auto it = live.find(id);
      if (it == live.end()) throw InvalidArgument("merge references post " + id + " that is not live");
      members.push_back(it->second);
    }
    next.insert(Cluster(m.id, std::move(members)));
  }
  if (next.post_count() != state_.post_count()) throw InvalidArgument("merge does not cover every live post");
  next.pending_offline = pending_offline;
  if (pending_offline) {
    std::vector<Cluster> snap;
    for (const auto& [id, c] : next.clusters()) snap.push_back(c);
    next.saved_snapshot = std::move(snap);
  }
  state_ = std::move(next);
  since_request_ = 0;
}

}  // namespace threatwatch::cluster
