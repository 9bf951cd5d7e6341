#include "threatwatch/service/event_log.hpp"

#include <algorithm>

#include "threatwatch/cluster/persistence.hpp"
#include "threatwatch/common/error.hpp"
#include "threatwatch/common/time.hpp"
#include "threatwatch/corpus/normalize.hpp"
#include "threatwatch/service/config.hpp"

namespace threatwatch::service {
namespace {

using nlohmann::json;

cluster::OutcomeKind outcome_from_string(std::string_view s) {
  for (auto k : {cluster::OutcomeKind::NewThreat, cluster::OutcomeKind::Update, cluster::OutcomeKind::NeedsOffline}) {
    if (cluster::to_string(k) == s) return k;
  }
  throw ParseError("unknown outcome '" + std::string(s) + "'");
}

struct ToJson {
  json operator()(const StartRecord& r) const {
    return {{"type", "start"},
            {"clustering", cluster::to_json(r.clustering)},
            {"offline_mode", to_string(r.engine.mode)},
            {"offline_batch", r.engine.offline_batch}};
  }
  json operator()(const PostRecord& r) const {
    json j = {{"type", "post"},
              {"post", corpus::to_json(r.post)},
              {"stage", to_string(r.stage)},
              {"assets", r.assets},
              {"baseline", r.baseline},
              {"tokens", r.tokens},
              {"model_version", r.model_version}};
    if (r.score) j["score"] = *r.score;
    if (r.vector) j["vector"] = features::to_json(*r.vector);
    if (r.outcome) j["outcome"] = cluster::to_string(*r.outcome);
    if (r.cluster) j["cluster"] = *r.cluster;
    return j;
  }
  json operator()(const MergeRecord& r) const {
    json clusters = json::array();
    for (const auto& m : r.clusters) clusters.push_back({{"id", m.id}, {"posts", m.post_ids}});
    return {{"type", "merge"}, {"at", format_rfc3339(r.at)}, {"clusters", clusters}, {"pending_offline", r.pending_offline}};
  }
  json operator()(const ExpireRecord& r) const {
    return {{"type", "expire"}, {"at", format_rfc3339(r.at)}, {"clusters", r.clusters}};
  }
  json operator()(const ModelRecord& r) const {
    return {{"type", "model"}, {"version", r.version}, {"description", r.description}, {"examples", r.examples}};
  }
};

}  // namespace

bool MergeRecord::operator==(const MergeRecord& o) const {
  if (at != o.at || pending_offline != o.pending_offline || clusters.size() != o.clusters.size()) return false;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].id != o.clusters[i].id || clusters[i].post_ids != o.clusters[i].post_ids) return false;
  }
  return true;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Dropped:
      return "dropped";
    case Stage::FilteredOut:
      return "filtered_out";
    case Stage::Irrelevant:
      return "irrelevant";
    case Stage::Relevant:
      return "relevant";
  }
  return "dropped";
}

Stage stage_from_string(std::string_view s) {
  for (auto st : {Stage::Dropped, Stage::FilteredOut, Stage::Irrelevant, Stage::Relevant}) {
    if (to_string(st) == s) return st;
  }
  throw ParseError("unknown stage '" + std::string(s) + "'");
}

json to_json(const LogEvent& e) { return std::visit(ToJson{}, e); }

LogEvent log_event_from_json(const json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "start") {
      StartRecord r;
      r.clustering = cluster::clustering_config_from_json(j.at("clustering"));
      r.engine.mode = offline_mode_from_string(j.at("offline_mode").get<std::string>());
      r.engine.offline_batch = j.at("offline_batch").get<std::size_t>();
      return r;
    }
    if (type == "post") {
      PostRecord r;
      r.post = corpus::post_from_json(j.at("post"));
      r.stage = stage_from_string(j.at("stage").get<std::string>());
      r.assets = j.at("assets").get<std::vector<std::string>>();
      r.baseline = j.at("baseline").get<bool>();
      r.tokens = j.at("tokens").get<std::vector<std::string>>();
      r.model_version = j.at("model_version").get<int>();
      if (j.contains("score")) r.score = j["score"].get<double>();
      if (j.contains("vector")) r.vector = features::feature_vector_from_json(j["vector"]);
      if (j.contains("outcome")) r.outcome = outcome_from_string(j["outcome"].get<std::string>());
      if (j.contains("cluster")) r.cluster = j["cluster"].get<cluster::ClusterId>();
      return r;
    }
    if (type == "merge") {
      MergeRecord r;
      r.at = parse_rfc3339(j.at("at").get<std::string>());
      for (const auto& c : j.at("clusters"))
        r.clusters.push_back({c.at("id").get<cluster::ClusterId>(), c.at("posts").get<std::vector<std::string>>()});
      r.pending_offline = j.at("pending_offline").get<bool>();
      return r;
    }
    if (type == "expire") {
      return ExpireRecord{parse_rfc3339(j.at("at").get<std::string>()), j.at("clusters").get<std::vector<cluster::ClusterId>>()};
    }
    if (type == "model") {
      return ModelRecord{j.at("version").get<int>(), j.at("description").get<std::string>(), j.at("examples").get<std::size_t>()};
    }
    throw ParseError("unknown event type '" + type + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad log event: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad log event: ") + e.what());
  }
}

EventLogWriter::EventLogWriter(const std::filesystem::path& path, bool truncate) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, truncate ? std::ios::trunc : std::ios::app);
  if (!out_) throw Error("cannot open event log " + path.string());
}

void EventLogWriter::append(const LogEvent& e) {
  out_ << to_json(e).dump() << '\n';
  out_.flush();
  if (!out_) throw Error("event log write failed");
}

void read_event_log(const std::filesystem::path& path, const std::function<void(LogEvent)>& on_event,
                    const std::function<void(std::size_t, const std::string&)>& on_error) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open event log " + path.string());
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      on_event(log_event_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      if (on_error) on_error(n, e.what());
    } catch (const ParseError& e) {
      if (on_error) on_error(n, e.what());
    }
  }
}

std::unique_ptr<cluster::ClusterEngine> replay_cluster_state(const std::filesystem::path& path,
                                                             const ReplayHooks& hooks) {
  std::unique_ptr<cluster::ClusterEngine> engine;
  auto ensure = [&](const cluster::ClusteringConfig& cfg) {
    if (!engine) engine = std::make_unique<cluster::ClusterEngine>(cfg, cluster::EngineOptions{cluster::OfflineMode::Manual, 1});
  };
  // The engine logs an expiry while ingesting the post that triggered it,
  // ahead of that post's record; it is applied after the post's
  // before_post hook so hooks see the state the live pipeline saw.
  std::optional<ExpireRecord> pending_expiry;
  auto expire = [&] {
    if (!pending_expiry) return;
    auto removed = engine->advance_clock(pending_expiry->at);
    std::sort(removed.begin(), removed.end());
    auto expected = pending_expiry->clusters;
    std::sort(expected.begin(), expected.end());
    if (removed != expected)
      throw InvalidArgument(path.string() + ": replayed expiry at " + format_rfc3339(pending_expiry->at) +
                            " differs from the log");
    pending_expiry.reset();
  };
  read_event_log(
      path,
      [&](LogEvent e) {
        if (auto* s = std::get_if<StartRecord>(&e)) {
          ensure(s->clustering);
        } else if (auto* p = std::get_if<PostRecord>(&e)) {
          ensure({});
          if (hooks.before_post) hooks.before_post(*p, *engine);
          expire();
          if (p->stage == Stage::Relevant && p->vector) {
            auto post = std::make_shared<cluster::ClusteredPost>();
            post->post_id = p->post.id;
            post->token_set = corpus::distinct_sorted(p->tokens);
            post->vector = *p->vector;
            post->timestamp = p->post.timestamp;
            post->original_text = p->post.text;
            engine->ingest(std::move(post));
          }
          if (hooks.after_post) hooks.after_post(*p);
        } else if (auto* m = std::get_if<MergeRecord>(&e)) {
          ensure({});
          expire();
          engine->apply_merge(m->clusters, m->pending_offline);
        } else if (auto* x = std::get_if<ExpireRecord>(&e)) {
          ensure({});
          expire();
          pending_expiry = *x;
        } else if (auto* r = std::get_if<ModelRecord>(&e)) {
          if (hooks.on_model) hooks.on_model(*r);
        }
      },
      [&](std::size_t line, const std::string& message) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": " + message);
      });
  ensure({});
  expire();
  return engine;
}

}  // namespace threatwatch::service
