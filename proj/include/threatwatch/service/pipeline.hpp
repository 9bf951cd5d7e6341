#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "threatwatch/cluster/engine.hpp"
#include "threatwatch/corpus/stopwords.hpp"
#include "threatwatch/filter/keywords.hpp"
#include "threatwatch/ioc/misp.hpp"
#include "threatwatch/service/config.hpp"
#include "threatwatch/service/event_log.hpp"
#include "threatwatch/service/labels.hpp"
#include "threatwatch/service/metrics.hpp"
#include "threatwatch/service/trainer.hpp"

namespace threatwatch::service {

/// A post waiting for an analyst label.
struct QueueItem {
  std::string post_id;
  std::string text;
  Timestamp timestamp{};
  Stage stage = Stage::Irrelevant;
  std::optional<double> score;
};

nlohmann::json to_json(const QueueItem& q);

/// Runs posts through normalize -> asset filter -> TF-IDF -> classifier ->
/// clustering, logging every stage. Not thread-safe; see Runtime.
class Pipeline {
 public:
  enum class Start {
    /// Empty state; the event log is truncated.
    Fresh,
    /// State rebuilt from the existing event log, which is then appended to
    /// (read-only when not persisting).
    Resume,
  };

  /// `models` may be null only in bootstrap mode. `persist` = false keeps
  /// everything in memory (no log, snapshot or export directory).
  Pipeline(PipelineConfig config, std::shared_ptr<const ModelBundle> models, Start start = Start::Fresh,
           bool persist = true);

  /// Throws InvalidArgument for a post id seen before.
  PostRecord process(const corpus::Post& post);
  /// Closes the current metrics day and writes the snapshot.
  void finish();

  /// Later posts use `models`; a model record is appended to the log.
  void swap_models(std::shared_ptr<const ModelBundle> models, std::size_t examples);
  std::shared_ptr<const ModelBundle> models() const { return models_; }

  void set_asset_keywords(filter::AssetKeywordSet assets) { assets_ = std::move(assets); }
  const filter::AssetKeywordSet& asset_keywords() const { return assets_; }

  const PipelineConfig& config() const { return config_; }
  const cluster::ClusterEngine& engine() const { return *engine_; }
  std::size_t processed() const { return seen_.size(); }

  std::vector<DailyClusterMetrics> daily_metrics() const;
  ReductionReport reduction() const;
  DurationReport durations() const;

  /// Events of active clusters, by cluster id.
  const std::map<cluster::ClusterId, ioc::MispEvent>& iocs() const { return iocs_; }
  /// Active or archived.
  std::optional<ioc::MispEvent> ioc(cluster::ClusterId id) const;
  /// Writes one event-<uuid>.json per cluster; returns the number written.
  std::size_t export_iocs(const std::filesystem::path& dir, bool include_archived) const;

  /// Posts that passed the asset filter, for labeling.
  std::optional<corpus::Post> find_post(const std::string& id) const;
  /// Most recent unlabeled posts that passed the asset filter, newest first.
  std::vector<QueueItem> label_queue(const LabelStore& labels, std::size_t limit) const;

  nlohmann::json snapshot() const { return engine_->snapshot(); }
  void write_snapshot() const;

 private:
  void wire_listener();
  void log(const LogEvent& e);

  PipelineConfig config_;
  std::shared_ptr<const ModelBundle> models_;
  bool persist_;
  corpus::StopwordList stopwords_;
  filter::AssetKeywordSet assets_;
  filter::SecurityKeywordSet security_;
  ioc::TaxonomyRules rules_;
  /// Unit-idf hashing used for cluster vectors when bootstrapping without a model.
  features::TfIdfModel bootstrap_tfidf_;
  std::unique_ptr<cluster::ClusterEngine> engine_;
  std::unique_ptr<EventLogWriter> log_;
  MetricsRecorder metrics_;
  std::set<std::string> seen_;
  std::map<std::string, QueueItem> filtered_;
  std::map<cluster::ClusterId, ioc::MispEvent> iocs_;
  std::map<cluster::ClusterId, ioc::MispEvent> archived_iocs_;
  PostRecord* pending_ = nullptr;
  std::size_t since_snapshot_ = 0;
};

}  // namespace threatwatch::service
