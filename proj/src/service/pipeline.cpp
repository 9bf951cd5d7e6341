#include "threatwatch/service/pipeline.hpp"

#include <algorithm>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/text_io.hpp"
#include "threatwatch/corpus/normalize.hpp"

namespace threatwatch::service {

nlohmann::json to_json(const QueueItem& q) {
  nlohmann::json j = {{"post_id", q.post_id},
                      {"text", q.text},
                      {"timestamp", format_rfc3339(q.timestamp)},
                      {"verdict", q.stage == Stage::Relevant ? "relevant" : "irrelevant"}};
  j["score"] = q.score ? nlohmann::json(*q.score) : nlohmann::json();
  return j;
}

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<const ModelBundle> models, Start start, bool persist)
    : config_(std::move(config)),
      models_(std::move(models)),
      persist_(persist),
      stopwords_(corpus::StopwordList::load(config_.stopwords)),
      assets_(filter::AssetKeywordSet::load(config_.asset_keywords)),
      security_(filter::SecurityKeywordSet::load(config_.security_keywords)),
      rules_(ioc::load_taxonomy_rules(config_.taxonomy_rules)),
      bootstrap_tfidf_(config_.feature_dimension, features::kDefaultHashSeed, 1,
                       std::vector<double>(config_.feature_dimension, 1.0)) {
  if (!models_ && !config_.bootstrap) throw InvalidArgument("a model is required outside bootstrap mode");
  if (start == Start::Resume && std::filesystem::exists(config_.event_log_path())) {
    std::optional<int> logged_version;
    ReplayHooks hooks;
    hooks.on_model = [&](const ModelRecord& m) { logged_version = m.version; };
    hooks.before_post = [&](const PostRecord& p, const cluster::ClusterEngine& e) {
      metrics_.advance_to(utc_day(p.post.timestamp), e.state());
    };
    hooks.after_post = [&](const PostRecord& p) {
      metrics_.record(p);
      seen_.insert(p.post.id);
      if (p.stage == Stage::Relevant || p.stage == Stage::Irrelevant)
        filtered_[p.post.id] = {p.post.id, p.post.text, p.post.timestamp, p.stage, p.score};
    };
    auto replayed = replay_cluster_state(config_.event_log_path(), hooks);
    engine_ = cluster::ClusterEngine::restore(replayed->snapshot(), config_.engine);
    for (const auto& c : engine_->archive()) archived_iocs_.emplace(c.id(), ioc::generate_ioc(c, rules_));
    for (const auto& [id, c] : engine_->state().clusters()) iocs_.emplace(id, ioc::generate_ioc(c, rules_));
    if (persist_) {
      log_ = std::make_unique<EventLogWriter>(config_.event_log_path(), false);
      if (models_ && logged_version != models_->version) log(ModelRecord{models_->version, models_->description, 0});
    }
  } else {
    engine_ = std::make_unique<cluster::ClusterEngine>(config_.clustering, config_.engine);
    if (persist_) {
      log_ = std::make_unique<EventLogWriter>(config_.event_log_path(), true);
      log(StartRecord{config_.clustering, config_.engine});
      if (models_) log(ModelRecord{models_->version, models_->description, 0});
    }
  }
  wire_listener();
}

void Pipeline::log(const LogEvent& e) {
  if (log_) log_->append(e);
}

void Pipeline::wire_listener() {
  engine_->listener.on_ingest = [this](const cluster::ClusteredPost&, const cluster::IngestOutcome& outcome) {
    if (!pending_) return;
    pending_->outcome = outcome.kind;
    pending_->cluster = outcome.cluster;
    log(*pending_);
    pending_ = nullptr;
  };
  engine_->listener.on_expire = [this](Timestamp now, const std::vector<cluster::Cluster>& removed) {
    ExpireRecord r{now, {}};
    for (const auto& c : removed) {
      r.clusters.push_back(c.id());
      archived_iocs_.insert_or_assign(c.id(), ioc::generate_ioc(c, rules_));
      iocs_.erase(c.id());
    }
    log(r);
  };
  engine_->listener.on_merge = [this](const cluster::ClusterState& merged, const cluster::OfflineResult&,
                                      const cluster::MergeReport&) {
    MergeRecord r{engine_->clock().value_or(Timestamp{}), {}, merged.pending_offline};
    iocs_.clear();
    for (const auto& [id, c] : merged.clusters()) {
      cluster::ClusterMembership m{id, {}};
      for (const auto& p : c.members()) m.post_ids.push_back(p->post_id);
      r.clusters.push_back(std::move(m));
      iocs_.emplace(id, ioc::generate_ioc(c, rules_));
    }
    log(r);
  };
}

PostRecord Pipeline::process(const corpus::Post& post) {
  if (seen_.contains(post.id)) throw InvalidArgument("duplicate post id " + post.id);
  PostRecord rec;
  rec.post = post;
  rec.tokens = corpus::normalize_text(post.text, stopwords_, config_.normalize);
  rec.assets = filter::matched_assets(post.text, assets_);
  if (!rec.assets.empty()) rec.baseline = filter::baseline_filter(post.text, assets_, security_);
  const auto models = models_;
  rec.model_version = models ? models->version : 0;

  if (rec.tokens.empty()) {
    rec.stage = Stage::Dropped;
  } else if (rec.assets.empty()) {
    rec.stage = Stage::FilteredOut;
  } else if (config_.bootstrap) {
    rec.stage = Stage::Relevant;
  } else {
    const auto x = models->tfidf.transform(rec.tokens);
    rec.score = models->classifier.score(x);
    rec.stage = models->classifier.predict(x) == classify::Label::Positive ? Stage::Relevant : Stage::Irrelevant;
  }

  metrics_.advance_to(utc_day(post.timestamp), engine_->state());
  seen_.insert(post.id);
  if (rec.stage == Stage::Relevant) {
    const auto& tfidf = models ? models->tfidf : bootstrap_tfidf_;
    auto cp = std::make_shared<cluster::ClusteredPost>();
    cp->post_id = post.id;
    cp->token_set = corpus::distinct_sorted(rec.tokens);
    cp->vector = tfidf.transform(rec.tokens);
    cp->timestamp = post.timestamp;
    cp->original_text = post.text;
    rec.vector = cp->vector;
    pending_ = &rec;
    const auto outcome = engine_->ingest(std::move(cp));
    pending_ = nullptr;
    // A batch merge inside ingest may already have renumbered the clusters.
    const auto& live = engine_->state().clusters();
    if (auto it = live.find(outcome.cluster); it != live.end())
      iocs_.insert_or_assign(outcome.cluster, ioc::generate_ioc(it->second, rules_));
  } else {
    log(rec);
  }
  if (rec.stage == Stage::Relevant || rec.stage == Stage::Irrelevant)
    filtered_[post.id] = {post.id, post.text, post.timestamp, rec.stage, rec.score};
  metrics_.record(rec);
  if (persist_ && config_.snapshot_every > 0 && ++since_snapshot_ >= config_.snapshot_every) {
    write_snapshot();
    since_snapshot_ = 0;
  }
  return rec;
}

void Pipeline::finish() {
  engine_->drain();
  metrics_.finish(engine_->state());
  if (persist_) write_snapshot();
}

void Pipeline::swap_models(std::shared_ptr<const ModelBundle> models, std::size_t examples) {
  if (!models) throw InvalidArgument("cannot swap in an empty model");
  const auto dim = models_ ? models_->tfidf.dimension() : bootstrap_tfidf_.dimension();
  if (models->tfidf.dimension() != dim) throw InvalidArgument("new model changes the feature dimension");
  models_ = std::move(models);
  log(ModelRecord{models_->version, models_->description, examples});
}

std::vector<DailyClusterMetrics> Pipeline::daily_metrics() const { return metrics_.rows_with_open_day(engine_->state()); }

ReductionReport Pipeline::reduction() const {
  const auto rows = daily_metrics();
  return reduction_report(rows, engine_->state().size() + engine_->archive().size());
}

DurationReport Pipeline::durations() const { return duration_report(*engine_); }

std::optional<ioc::MispEvent> Pipeline::ioc(cluster::ClusterId id) const {
  if (auto it = iocs_.find(id); it != iocs_.end()) return it->second;
  if (auto it = archived_iocs_.find(id); it != archived_iocs_.end()) return it->second;
  return std::nullopt;
}

std::size_t Pipeline::export_iocs(const std::filesystem::path& dir, bool include_archived) const {
  std::filesystem::create_directories(dir);
  std::size_t n = 0;
  auto write = [&](const ioc::MispEvent& ev) {
    write_file_atomic(dir / ("event-" + ev.uuid + ".json"), ioc::to_json(ev).dump(2) + "\n");
    ++n;
  };
  for (const auto& [id, ev] : iocs_) write(ev);
  if (include_archived) {
    for (const auto& [id, ev] : archived_iocs_) write(ev);
  }
  return n;
}

std::optional<corpus::Post> Pipeline::find_post(const std::string& id) const {
  auto it = filtered_.find(id);
  if (it == filtered_.end()) return std::nullopt;
  corpus::Post p;
  p.id = it->second.post_id;
  p.text = it->second.text;
  p.timestamp = it->second.timestamp;
  return p;
}

std::vector<QueueItem> Pipeline::label_queue(const LabelStore& labels, std::size_t limit) const {
  std::vector<QueueItem> out;
  for (const auto& [id, q] : filtered_) {
    if (!labels.get(id)) out.push_back(q);
  }
  std::sort(out.begin(), out.end(), [](const QueueItem& a, const QueueItem& b) {
    if (a.timestamp != b.timestamp) return a.timestamp > b.timestamp;
    return a.post_id < b.post_id;
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

void Pipeline::write_snapshot() const {
  std::filesystem::create_directories(config_.state_dir);
  write_file_atomic(config_.snapshot_path(), engine_->snapshot().dump(1) + "\n");
}

}  // namespace threatwatch::service
