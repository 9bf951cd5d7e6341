#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include <json.hpp>

#include "threatwatch/cluster/engine.hpp"
#include "threatwatch/service/event_log.hpp"

namespace threatwatch::service {

struct DailyCounts {
  std::size_t collected = 0;
  std::size_t asset_filtered = 0;
  std::size_t baseline = 0;
  std::size_t relevant = 0;
  /// Distinct clusters that received a relevant post that day.
  std::size_t clusters_touched = 0;

  DailyCounts& operator+=(const DailyCounts& o);
  bool operator==(const DailyCounts&) const = default;
};

struct DailyClusterMetrics {
  std::chrono::sys_days date{};
  /// Over the clusters active at the end of the day; null without clusters.
  std::optional<double> mean_wts;
  /// 0 with fewer than two clusters.
  double max_jaccard = 0.0;
  std::size_t active_clusters = 0;
  DailyCounts counts;
  /// Baseline-selected posts still in the keyword baseline's pool, which
  /// drops every post a fixed window after it arrived.
  std::size_t baseline_pool = 0;

  bool operator==(const DailyClusterMetrics&) const = default;
};

nlohmann::json to_json(const DailyCounts& c);
nlohmann::json to_json(const DailyClusterMetrics& m);
nlohmann::json to_json(std::span<const DailyClusterMetrics> rows);

/// Builds one row per UTC day from the first post on, including quiet days.
class MetricsRecorder {
 public:
  explicit MetricsRecorder(Duration baseline_window = days(7));

  /// Closes every open day before `day`; `state` is taken as the state at
  /// the end of each of them.
  void advance_to(std::chrono::sys_days day, const cluster::ClusterState& state);
  /// Counts a post of the current day. Call advance_to first.
  void record(const PostRecord& r);
  /// Closes the open day.
  void finish(const cluster::ClusterState& state);

  const std::vector<DailyClusterMetrics>& rows() const { return rows_; }
  /// Closed rows plus the open day as it stands against `state`.
  std::vector<DailyClusterMetrics> rows_with_open_day(const cluster::ClusterState& state) const;

 private:
  DailyClusterMetrics close_row(std::chrono::sys_days day, const DailyCounts& counts,
                                const cluster::ClusterState& state) const;

  Duration window_;
  std::optional<std::chrono::sys_days> open_day_;
  DailyCounts counts_;
  std::set<cluster::ClusterId> touched_;
  std::deque<Timestamp> baseline_times_;
  std::vector<DailyClusterMetrics> rows_;
};

struct ReductionReport {
  std::vector<std::pair<std::chrono::sys_days, DailyCounts>> days;
  DailyCounts totals;
  /// Clusters shown to the analyst over the whole stream (active + archived).
  std::size_t exemplars = 0;
  /// 1 - relevant / baseline; null when nothing passed the baseline.
  std::optional<double> classifier_reduction;
  /// 1 - exemplars / relevant; null without relevant posts.
  std::optional<double> clustering_reduction;

  /// collected >= asset_filtered >= relevant >= clusters_touched on every
  /// day, and relevant >= exemplars overall.
  bool monotone() const;
  /// Same chain with the keyword baseline in place of the asset filter.
  bool monotone_with_baseline() const;
  nlohmann::json to_json() const;
};

ReductionReport reduction_report(std::span<const DailyClusterMetrics> rows, std::size_t exemplars);

struct DurationReport {
  /// Bucket (days, at least 1) -> cluster count, over archived and active clusters.
  std::map<long, std::size_t> histogram;
  std::size_t archived = 0;
  std::size_t active = 0;
  nlohmann::json to_json() const;
};

DurationReport duration_report(const cluster::ClusterEngine& engine);

/// Re-clusters the relevant posts of a log from scratch with the logged
/// clustering settings (re-clustering optionally forced on or off) and
/// returns the daily metrics.
std::vector<DailyClusterMetrics> evaluate_clustering(const std::filesystem::path& log,
                                                     std::optional<bool> reclustering = std::nullopt);

/// Reduction report of a log; exemplars come from the replayed state.
ReductionReport reduction_report_from_log(const std::filesystem::path& log);

}  // namespace threatwatch::service
