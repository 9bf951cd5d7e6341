#include <unordered_map>

#include "threatwatch/cluster/engine.hpp"
#include "threatwatch/cluster/persistence.hpp"
#include "threatwatch/common/error.hpp"

namespace threatwatch::cluster {
namespace {

constexpr int kFormatVersion = 1;

}  // namespace

nlohmann::json to_json(const ClusteredPost& p) {
  return {{"id", p.post_id},
          {"timestamp", format_rfc3339(p.timestamp)},
          {"words", p.token_set},
          {"vector", features::to_json(p.vector)},
          {"text", p.original_text}};
}

PostPtr clustered_post_from_json(const nlohmann::json& j) {
  try {
    auto p = std::make_shared<ClusteredPost>();
    p->post_id = j.at("id").get<std::string>();
    p->timestamp = parse_rfc3339(j.at("timestamp").get<std::string>());
    p->token_set = j.at("words").get<std::vector<std::string>>();
    p->vector = features::feature_vector_from_json(j.at("vector"));
    p->original_text = j.value("text", "");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad clustered post: ") + e.what());
  }
}

nlohmann::json to_json(const Cluster& c, bool with_posts) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : c.members()) {
    if (with_posts) {
      members.push_back(to_json(*m));
    } else {
      members.push_back(m->post_id);
    }
  }
  return {{"id", c.id()},
          {"created_at", format_rfc3339(c.created_at())},
          {"last_update", format_rfc3339(c.last_update())},
          {"exemplar", c.exemplar()->post_id},
          {"wts", c.wts()},
          {"size", c.size()},
          {"members", members}};
}

Cluster cluster_from_json(const nlohmann::json& j) {
  try {
    std::vector<PostPtr> members;
    for (const auto& m : j.at("members")) members.push_back(clustered_post_from_json(m));
    return Cluster(j.at("id").get<ClusterId>(), std::move(members));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad cluster: ") + e.what());
  }
}

nlohmann::json ClusterEngine::snapshot() const {
  if (inflight_) throw Error("snapshot requested while an offline run is in flight");
  nlohmann::json clusters = nlohmann::json::array(), archive = nlohmann::json::array();
  for (const auto& [id, c] : state_.clusters()) clusters.push_back(to_json(c, true));
  for (const auto& c : archive_) archive.push_back(to_json(c, true));
  nlohmann::json saved = nullptr;
  if (state_.saved_snapshot) {
    saved = nlohmann::json::array();
    for (const auto& c : *state_.saved_snapshot) {
      nlohmann::json ids = nlohmann::json::array();
      for (const auto& m : c.members()) ids.push_back(m->post_id);
      saved.push_back({{"id", c.id()}, {"members", ids}});
    }
  }
  return {{"format", "threatwatch-cluster-state"},
          {"version", kFormatVersion},
          {"config", to_json(config_)},
          {"clock", clock_ ? nlohmann::json(format_rfc3339(*clock_)) : nlohmann::json(nullptr)},
          {"next_id", state_.next_id()},
          {"pending_offline", state_.pending_offline},
          {"since_request", since_request_},
          {"saved_snapshot", saved},
          {"clusters", clusters},
          {"archive", archive}};
}

std::unique_ptr<ClusterEngine> ClusterEngine::restore(const nlohmann::json& j, EngineOptions options) {
  try {
    if (j.at("format") != "threatwatch-cluster-state") throw ParseError("not a cluster state snapshot");
    if (j.at("version").get<int>() != kFormatVersion) throw ParseError("unsupported cluster state version");
    auto engine = std::make_unique<ClusterEngine>(clustering_config_from_json(j.at("config")), options);
    if (!j.at("clock").is_null()) engine->clock_ = parse_rfc3339(j.at("clock").get<std::string>());
    for (const auto& c : j.at("clusters")) engine->state_.insert(cluster_from_json(c));
    for (const auto& c : j.at("archive")) engine->archive_.push_back(cluster_from_json(c));
    engine->state_.set_next_id(std::max(engine->state_.next_id(), j.at("next_id").get<ClusterId>()));
    engine->state_.pending_offline = j.at("pending_offline").get<bool>();
    engine->since_request_ = j.at("since_request").get<std::size_t>();
    std::unordered_map<std::string, PostPtr> by_id;
    for (const auto& [id, c] : engine->state_.clusters()) {
      for (const auto& m : c.members()) by_id.emplace(m->post_id, m);
    }
    if (!j.at("saved_snapshot").is_null()) {
      std::vector<Cluster> saved;
      for (const auto& s : j.at("saved_snapshot")) {
        std::vector<PostPtr> members;
        for (const auto& id : s.at("members")) {
          auto it = by_id.find(id.get<std::string>());
          if (it == by_id.end()) throw ParseError("saved snapshot references an unknown post");
          members.push_back(it->second);
        }
        saved.emplace_back(s.at("id").get<ClusterId>(), std::move(members));
      }
      engine->state_.saved_snapshot = std::move(saved);
    }
    for (const auto& [id, p] : by_id) engine->seen_.insert(id);
    for (const auto& c : engine->archive_) {
      for (const auto& m : c.members()) {
        if (!engine->seen_.insert(m->post_id).second) throw ParseError("post " + m->post_id + " appears twice");
      }
    }
    return engine;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad cluster state snapshot: ") + e.what());
  }
}

}  // namespace threatwatch::cluster
