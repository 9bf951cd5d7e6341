#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <variant>

#include <json.hpp>

#include "threatwatch/classify/mlp.hpp"
#include "threatwatch/classify/svm.hpp"

namespace threatwatch::classify {

enum class ClassifierKind { Svm, Mlp };

std::string_view to_string(ClassifierKind k);
ClassifierKind classifier_kind_from_string(std::string_view s);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::Svm;
  SvmParams svm;
  MlpParams mlp;

  /// Short stable description, e.g. "svm c=5 step=0.05".
  std::string describe() const;
};

nlohmann::json to_json(const ClassifierConfig& c);
/// Missing keys keep their defaults.
ClassifierConfig classifier_config_from_json(const nlohmann::json& j);

/// A trained relevance model of either kind plus free-form training metadata.
class Classifier {
 public:
  Classifier() = default;
  explicit Classifier(LinearSvmModel m) : model_(std::move(m)) {}
  explicit Classifier(MlpModel m) : model_(std::move(m)) {}

  ClassifierKind kind() const { return model_.index() == 0 ? ClassifierKind::Svm : ClassifierKind::Mlp; }
  const std::variant<LinearSvmModel, MlpModel>& model() const { return model_; }
  std::uint32_t dimension() const;

  Label predict(const features::FeatureVector& x) const;
  /// Signed confidence: SVM margin, or P(positive) − 0.5 for the MLP.
  double score(const features::FeatureVector& x) const;

  nlohmann::json metadata = nlohmann::json::object();

  nlohmann::json to_json() const;
  static Classifier from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Classifier load(const std::filesystem::path& path);

 private:
  std::variant<LinearSvmModel, MlpModel> model_;
};

Classifier train_classifier(const ClassifierConfig& config, std::span<const LabeledExample> data);

}  // namespace threatwatch::classify
