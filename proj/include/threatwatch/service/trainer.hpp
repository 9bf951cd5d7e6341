#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "threatwatch/classify/classifier.hpp"
#include "threatwatch/classify/evaluation.hpp"
#include "threatwatch/classify/grid_search.hpp"
#include "threatwatch/features/tfidf.hpp"
#include "threatwatch/filter/keywords.hpp"
#include "threatwatch/service/config.hpp"
#include "threatwatch/service/labels.hpp"

namespace threatwatch::service {

struct LabeledPost {
  corpus::Post post;
  classify::Label label = classify::Label::Negative;
};

/// JSONL with the post fields plus "label" (relevant / irrelevant).
std::vector<LabeledPost> read_labeled_corpus(const std::filesystem::path& path);
void write_labeled_corpus(std::ostream& out, std::span<const LabeledPost> posts);

/// The models the pipeline runs with.
struct ModelBundle {
  features::TfIdfModel tfidf;
  classify::Classifier classifier;
  int version = 1;
  std::string description;
};

/// Writes tfidf.json and classifier.json into `dir`.
void save_models(const ModelBundle& models, const std::filesystem::path& dir);
ModelBundle load_models(const std::filesystem::path& dir);

struct TrainOptions {
  /// Run the hyperparameter grid and train the Pareto-chosen configuration
  /// of the configured classifier kind (or of the only kind searched).
  bool grid = false;
  classify::GridSpec grid_spec;
  /// 0 skips cross-validation.
  std::size_t cv_folds = 10;
  std::uint64_t cv_seed = 1;
};

struct TrainResult {
  ModelBundle models;
  classify::ClassifierConfig config;
  std::uint32_t dimension = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::optional<classify::CrossValidationResult> cv;
  std::optional<classify::GridReport> grid;

  nlohmann::json report() const;
};

/// Normalizes, fits TF-IDF on the whole corpus and trains the classifier.
/// Throws InvalidArgument when a class is missing after normalization.
TrainResult train_models(const PipelineConfig& config, std::span<const LabeledPost> corpus,
                         const TrainOptions& options = {});

/// Cross-validation with TF-IDF refitted on every training fold.
classify::CrossValidationResult cross_validate_pipeline(const classify::ClassifierConfig& classifier,
                                                        std::uint32_t dimension,
                                                        std::span<const std::vector<std::string>> tokens,
                                                        std::span<const classify::Label> labels, std::size_t folds,
                                                        std::uint64_t seed);

/// Oldest labeled post time a retrain may use, or nullopt for no limit.
std::optional<Timestamp> horizon_cutoff(Timestamp now, std::optional<int> horizon_days);

/// Current labels posted at or after `cutoff`, in post-id order.
std::vector<LabeledPost> labeled_posts(const LabelStore& labels, std::optional<Timestamp> cutoff);

/// Trains a new classifier on the given labels. The current TF-IDF model is
/// kept so vectors already held by clusters stay comparable. The result has
/// version current.version + 1. Throws InvalidArgument like train_models.
ModelBundle retrain_models(const ModelBundle& current, std::span<const LabeledPost> examples,
                           const PipelineConfig& config);

/// Examples that stay after removing `keyword` from the asset set: posts
/// that matched only that keyword are dropped, posts that also match a
/// remaining keyword stay.
std::vector<LabeledPost> examples_after_keyword_removal(std::span<const LabeledPost> examples,
                                                        const filter::AssetKeywordSet& assets,
                                                        const std::string& keyword);

}  // namespace threatwatch::service
