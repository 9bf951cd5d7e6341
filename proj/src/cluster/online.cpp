#include "threatwatch/cluster/online.hpp"

#include <algorithm>

#include "threatwatch/common/error.hpp"

namespace threatwatch::cluster {

void ClusteringConfig::validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) throw InvalidArgument("tau must be in (0, 1]");
  if (theta <= Duration::zero()) throw InvalidArgument("theta must be positive");
  if (kmeans_max_iterations < 1) throw InvalidArgument("kmeans_max_iterations must be at least 1");
  if (kmeans_min_k < 1) throw InvalidArgument("kmeans_min_k must be at least 1");
}

nlohmann::json to_json(const ClusteringConfig& c) {
  return {{"tau", c.tau},
          {"theta_days", std::chrono::duration<double, std::ratio<86400>>(c.theta).count()},
          {"kmeans_max_iterations", c.kmeans_max_iterations},
          {"kmeans_min_k", c.kmeans_min_k},
          {"rng_seed", c.rng_seed},
          {"reclustering", c.reclustering}};
}

ClusteringConfig clustering_config_from_json(const nlohmann::json& j) {
  ClusteringConfig c;
  try {
    c.tau = j.value("tau", c.tau);
    if (j.contains("theta_days")) {
      c.theta = std::chrono::duration_cast<Duration>(
          std::chrono::duration<double, std::ratio<86400>>(j.at("theta_days").get<double>()));
    }
    c.kmeans_max_iterations = j.value("kmeans_max_iterations", c.kmeans_max_iterations);
    c.kmeans_min_k = j.value("kmeans_min_k", c.kmeans_min_k);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.reclustering = j.value("reclustering", c.reclustering);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad clustering config: ") + e.what());
  }
  c.validate();
  return c;
}

bool meets_threshold(double wts, double tau) { return wts + 1e-12 >= tau; }

const Cluster& ClusterState::at(ClusterId id) const {
  auto it = clusters_.find(id);
  if (it == clusters_.end()) throw InvalidArgument("unknown cluster " + std::to_string(id));
  return it->second;
}

std::optional<ClusterId> ClusterState::cluster_of(const std::string& post_id) const {
  auto it = index_.find(post_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ClusterId ClusterState::create(std::vector<PostPtr> members) {
  const auto id = next_id_;
  insert(Cluster(id, std::move(members)));
  return id;
}

void ClusterState::insert(Cluster c) {
  const auto id = c.id();
  if (clusters_.contains(id)) throw InvalidArgument("duplicate cluster id " + std::to_string(id));
  for (const auto& m : c.members()) {
    if (index_.contains(m->post_id)) throw InvalidArgument("post " + m->post_id + " is already clustered");
  }
  for (const auto& m : c.members()) index_.emplace(m->post_id, id);
  clusters_.emplace(id, std::move(c));
  next_id_ = std::max(next_id_, id + 1);
}

void ClusterState::add_to(ClusterId id, PostPtr post) {
  auto it = clusters_.find(id);
  if (it == clusters_.end()) throw InvalidArgument("unknown cluster " + std::to_string(id));
  if (!index_.emplace(post->post_id, id).second) throw InvalidArgument("post " + post->post_id + " is already clustered");
  it->second.add(std::move(post));
}

Cluster ClusterState::remove(ClusterId id) {
  auto it = clusters_.find(id);
  if (it == clusters_.end()) throw InvalidArgument("unknown cluster " + std::to_string(id));
  Cluster c = std::move(it->second);
  clusters_.erase(it);
  for (const auto& m : c.members()) index_.erase(m->post_id);
  return c;
}

std::vector<PostPtr> ClusterState::flatten() const {
  std::vector<PostPtr> out;
  out.reserve(index_.size());
  for (const auto& [id, c] : clusters_) out.insert(out.end(), c.members().begin(), c.members().end());
  std::sort(out.begin(), out.end(), [](const PostPtr& a, const PostPtr& b) { return earlier(*a, *b); });
  return out;
}

std::vector<Hit> membership_hits(const ClusterState& state, const ClusteredPost& post, double tau) {
  std::vector<Hit> hits;
  for (const auto& [id, c] : state.clusters()) {
    double w = c.wts_with(post);
    if (meets_threshold(w, tau)) hits.push_back({id, w});
  }
  std::sort(hits.begin(), hits.end(), [&](const Hit& a, const Hit& b) {
    if (a.wts != b.wts) return a.wts > b.wts;
    auto ua = state.at(a.id).last_update(), ub = state.at(b.id).last_update();
    if (ua != ub) return ua > ub;
    return a.id < b.id;
  });
  return hits;
}

std::string_view to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::NewThreat:
      return "new_threat";
    case OutcomeKind::Update:
      return "update";
    case OutcomeKind::NeedsOffline:
      return "needs_offline";
  }
  return "unknown";
}

IngestOutcome online_ingest(ClusterState& state, PostPtr post, const ClusteringConfig& config) {
  if (state.contains_post(post->post_id)) throw InvalidArgument("duplicate post id " + post->post_id);
  auto hits = membership_hits(state, *post, config.tau);
  if (hits.empty()) return {OutcomeKind::NewThreat, state.create({std::move(post)})};
  const auto target = hits.front().id;
  state.add_to(target, std::move(post));
  if (hits.size() == 1) return {OutcomeKind::Update, target};
  state.pending_offline = true;
  std::vector<Cluster> snapshot;
  for (const auto& [id, c] : state.clusters()) snapshot.push_back(c);
  state.saved_snapshot = std::move(snapshot);
  return {OutcomeKind::NeedsOffline, target};
}

}  // namespace threatwatch::cluster
