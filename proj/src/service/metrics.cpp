#include "threatwatch/service/metrics.hpp"

#include <algorithm>

#include "threatwatch/cluster/measures.hpp"
#include "threatwatch/cluster/window.hpp"
#include "threatwatch/common/time.hpp"
#include "threatwatch/corpus/normalize.hpp"

namespace threatwatch::service {
namespace {

std::string date_string(std::chrono::sys_days d) { return format_date(Timestamp(d)); }

std::optional<double> ratio_reduction(std::size_t part, std::size_t whole) {
  if (whole == 0) return std::nullopt;
  return 1.0 - static_cast<double>(part) / static_cast<double>(whole);
}

nlohmann::json optional_number(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

DailyCounts& DailyCounts::operator+=(const DailyCounts& o) {
  collected += o.collected;
  asset_filtered += o.asset_filtered;
  baseline += o.baseline;
  relevant += o.relevant;
  clusters_touched += o.clusters_touched;
  return *this;
}

nlohmann::json to_json(const DailyCounts& c) {
  return {{"collected", c.collected},
          {"asset_filtered", c.asset_filtered},
          {"baseline", c.baseline},
          {"relevant", c.relevant},
          {"clusters_touched", c.clusters_touched}};
}

nlohmann::json to_json(const DailyClusterMetrics& m) {
  return {{"date", date_string(m.date)},
          {"mean_wts", optional_number(m.mean_wts)},
          {"max_jaccard", m.max_jaccard},
          {"active_clusters", m.active_clusters},
          {"counts", to_json(m.counts)},
          {"baseline_pool", m.baseline_pool}};
}

nlohmann::json to_json(std::span<const DailyClusterMetrics> rows) {
  auto j = nlohmann::json::array();
  for (const auto& r : rows) j.push_back(to_json(r));
  return j;
}

MetricsRecorder::MetricsRecorder(Duration baseline_window) : window_(baseline_window) {}

DailyClusterMetrics MetricsRecorder::close_row(std::chrono::sys_days day, const DailyCounts& counts,
                                               const cluster::ClusterState& state) const {
  DailyClusterMetrics row;
  row.date = day;
  std::vector<const cluster::Cluster*> active;
  for (const auto& [id, c] : state.clusters()) active.push_back(&c);
  row.mean_wts = cluster::mean_wts(active);
  row.max_jaccard = cluster::max_pairwise_jaccard(active);
  row.active_clusters = active.size();
  row.counts = counts;
  const Timestamp end = Timestamp(day + std::chrono::days(1));
  for (auto t : baseline_times_) row.baseline_pool += t > end - window_ && t < end;
  return row;
}

void MetricsRecorder::advance_to(std::chrono::sys_days day, const cluster::ClusterState& state) {
  if (!open_day_) {
    open_day_ = day;
    return;
  }
  while (*open_day_ < day) {
    counts_.clusters_touched = touched_.size();
    rows_.push_back(close_row(*open_day_, counts_, state));
    counts_ = {};
    touched_.clear();
    *open_day_ += std::chrono::days(1);
    const Timestamp horizon = Timestamp(*open_day_) - window_;
    while (!baseline_times_.empty() && baseline_times_.front() <= horizon) baseline_times_.pop_front();
  }
}

void MetricsRecorder::record(const PostRecord& r) {
  if (!open_day_) open_day_ = utc_day(r.post.timestamp);
  ++counts_.collected;
  counts_.asset_filtered += r.stage == Stage::Irrelevant || r.stage == Stage::Relevant;
  counts_.relevant += r.stage == Stage::Relevant;
  if (r.baseline) {
    ++counts_.baseline;
    auto pos = std::upper_bound(baseline_times_.begin(), baseline_times_.end(), r.post.timestamp);
    baseline_times_.insert(pos, r.post.timestamp);
  }
  if (r.stage == Stage::Relevant && r.cluster) touched_.insert(*r.cluster);
}

void MetricsRecorder::finish(const cluster::ClusterState& state) {
  if (!open_day_) return;
  counts_.clusters_touched = touched_.size();
  rows_.push_back(close_row(*open_day_, counts_, state));
  open_day_.reset();
  counts_ = {};
  touched_.clear();
}

std::vector<DailyClusterMetrics> MetricsRecorder::rows_with_open_day(const cluster::ClusterState& state) const {
  auto out = rows_;
  if (open_day_) {
    auto counts = counts_;
    counts.clusters_touched = touched_.size();
    out.push_back(close_row(*open_day_, counts, state));
  }
  return out;
}

bool ReductionReport::monotone() const {
  for (const auto& [day, c] : days) {
    if (!(c.collected >= c.asset_filtered && c.asset_filtered >= c.relevant && c.relevant >= c.clusters_touched))
      return false;
  }
  return totals.relevant >= exemplars;
}

bool ReductionReport::monotone_with_baseline() const {
  for (const auto& [day, c] : days) {
    if (!(c.collected >= c.baseline && c.baseline >= c.relevant && c.relevant >= c.clusters_touched)) return false;
  }
  return totals.collected >= totals.baseline && totals.baseline >= totals.relevant && totals.relevant >= exemplars;
}

nlohmann::json ReductionReport::to_json() const {
  auto rows = nlohmann::json::array();
  for (const auto& [day, c] : days) {
    auto j = service::to_json(c);
    j["date"] = date_string(day);
    rows.push_back(j);
  }
  return {{"days", rows},
          {"totals", service::to_json(totals)},
          {"exemplars", exemplars},
          {"classifier_reduction", optional_number(classifier_reduction)},
          {"clustering_reduction", optional_number(clustering_reduction)},
          {"monotone", monotone()},
          {"monotone_with_baseline", monotone_with_baseline()}};
}

ReductionReport reduction_report(std::span<const DailyClusterMetrics> rows, std::size_t exemplars) {
  ReductionReport r;
  for (const auto& row : rows) {
    r.days.emplace_back(row.date, row.counts);
    r.totals += row.counts;
  }
  r.exemplars = exemplars;
  r.classifier_reduction = ratio_reduction(r.totals.relevant, r.totals.baseline);
  r.clustering_reduction = ratio_reduction(exemplars, r.totals.relevant);
  return r;
}

nlohmann::json DurationReport::to_json() const {
  auto h = nlohmann::json::object();
  for (const auto& [bucket, n] : histogram) h[std::to_string(bucket)] = n;
  return {{"histogram", h}, {"archived", archived}, {"active", active}};
}

DurationReport duration_report(const cluster::ClusterEngine& engine) {
  std::vector<const cluster::Cluster*> all;
  for (const auto& c : engine.archive()) all.push_back(&c);
  for (const auto& [id, c] : engine.state().clusters()) all.push_back(&c);
  DurationReport r;
  r.histogram = cluster::duration_histogram(all);
  r.archived = engine.archive().size();
  r.active = engine.state().size();
  return r;
}

std::vector<DailyClusterMetrics> evaluate_clustering(const std::filesystem::path& log, std::optional<bool> reclustering) {
  std::unique_ptr<cluster::ClusterEngine> engine;
  MetricsRecorder recorder;
  auto ensure = [&](const StartRecord& start) {
    if (engine) return;
    auto cfg = start.clustering;
    if (reclustering) cfg.reclustering = *reclustering;
    auto options = start.engine;
    // Re-running offline work must be deterministic whatever the live mode was.
    options.mode = cluster::OfflineMode::Batch;
    engine = std::make_unique<cluster::ClusterEngine>(cfg, options);
  };
  read_event_log(log, [&](LogEvent e) {
    if (auto* s = std::get_if<StartRecord>(&e)) {
      ensure(*s);
      return;
    }
    auto* p = std::get_if<PostRecord>(&e);
    if (!p) return;
    ensure(StartRecord{});
    recorder.advance_to(utc_day(p->post.timestamp), engine->state());
    auto r = *p;
    r.cluster.reset();
    if (r.stage == Stage::Relevant && r.vector) {
      auto post = std::make_shared<cluster::ClusteredPost>();
      post->post_id = r.post.id;
      post->token_set = corpus::distinct_sorted(r.tokens);
      post->vector = *r.vector;
      post->timestamp = r.post.timestamp;
      post->original_text = r.post.text;
      r.cluster = engine->ingest(std::move(post)).cluster;
    }
    recorder.record(r);
  });
  if (engine) recorder.finish(engine->state());
  return recorder.rows();
}

ReductionReport reduction_report_from_log(const std::filesystem::path& log) {
  MetricsRecorder recorder;
  ReplayHooks hooks;
  hooks.before_post = [&](const PostRecord& p, const cluster::ClusterEngine& engine) {
    recorder.advance_to(utc_day(p.post.timestamp), engine.state());
  };
  hooks.after_post = [&](const PostRecord& p) { recorder.record(p); };
  auto engine = replay_cluster_state(log, hooks);
  recorder.finish(engine->state());
  return reduction_report(recorder.rows(), engine->state().size() + engine->archive().size());
}

}  // namespace threatwatch::service
