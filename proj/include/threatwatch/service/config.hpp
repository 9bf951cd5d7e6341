#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "threatwatch/classify/classifier.hpp"
#include "threatwatch/cluster/engine.hpp"
#include "threatwatch/corpus/normalize.hpp"

namespace threatwatch::service {

struct PipelineConfig {
  std::filesystem::path asset_keywords;
  std::filesystem::path stopwords;
  std::filesystem::path security_keywords;
  std::filesystem::path taxonomy_rules;
  /// Holds tfidf.json and classifier.json.
  std::filesystem::path model_dir;
  /// Event log, snapshot, labels and exported IoCs live here.
  std::filesystem::path state_dir;
  /// Default input file for `ingest` when --input is not given.
  std::filesystem::path input;
  std::string listen = "127.0.0.1:8080";

  std::uint32_t feature_dimension = 3000;
  classify::ClassifierConfig classifier;
  cluster::ClusteringConfig clustering;
  cluster::EngineOptions engine;
  corpus::NormalizeOptions normalize;
  /// Route every asset-filtered post to clustering and the label queue
  /// without consulting the classifier.
  bool bootstrap = false;
  /// Only labels newer than this many days take part in a retrain.
  std::optional<int> retrain_horizon_days;
  /// Write a state snapshot every this many ingested posts (0: only at the end).
  std::size_t snapshot_every = 1000;

  /// Bundled data files, models and state under `root`.
  static PipelineConfig defaults(const std::filesystem::path& root = ".");
  /// Relative paths are resolved against the config file's directory.
  /// Missing keys keep their defaults. Throws ParseError / InvalidArgument.
  static PipelineConfig load(const std::filesystem::path& path);

  /// Every referenced data file exists and parses. Throws InvalidArgument.
  void validate() const;

  std::filesystem::path event_log_path() const { return state_dir / "events.jsonl"; }
  std::filesystem::path snapshot_path() const { return state_dir / "snapshot.json"; }
  std::filesystem::path labels_path() const { return state_dir / "labels.jsonl"; }
};

PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json to_json(const PipelineConfig& c);

std::string_view to_string(cluster::OfflineMode m);
cluster::OfflineMode offline_mode_from_string(std::string_view s);

/// Applies THREATWATCH_CONFIG (used when `explicit_path` is empty) and
/// THREATWATCH_ADDR (overrides `listen`).
PipelineConfig load_config_from_environment(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace threatwatch::service
