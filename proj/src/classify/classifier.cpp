#include "threatwatch/classify/classifier.hpp"

#include <sstream>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/text_io.hpp"

namespace threatwatch::classify {
namespace {

constexpr int kFormatVersion = 1;

}  // namespace

std::string_view to_string(ClassifierKind k) { return k == ClassifierKind::Svm ? "svm" : "mlp"; }

ClassifierKind classifier_kind_from_string(std::string_view s) {
  if (s == "svm") return ClassifierKind::Svm;
  if (s == "mlp") return ClassifierKind::Mlp;
  throw InvalidArgument("unknown classifier '" + std::string(s) + "'");
}

std::string ClassifierConfig::describe() const {
  std::ostringstream out;
  if (kind == ClassifierKind::Svm) {
    out << "svm c=" << svm.c << " step=" << svm.step_size;
  } else {
    out << "mlp layers=" << mlp.hidden.size() << " neurons=";
    for (std::size_t i = 0; i < mlp.hidden.size(); ++i) out << (i ? "," : "") << mlp.hidden[i];
  }
  return out.str();
}

nlohmann::json to_json(const ClassifierConfig& c) {
  return {{"kind", to_string(c.kind)},
          {"svm",
           {{"c", c.svm.c},
            {"step_size", c.svm.step_size},
            {"max_iterations", c.svm.max_iterations},
            {"seed", c.svm.seed}}},
          {"mlp",
           {{"hidden", c.mlp.hidden},
            {"max_iterations", c.mlp.max_iterations},
            {"seed", c.mlp.seed},
            {"solver", c.mlp.solver == MlpSolver::Lbfgs ? "lbfgs" : "gd"},
            {"learning_rate", c.mlp.learning_rate}}}};
}

ClassifierConfig classifier_config_from_json(const nlohmann::json& j) {
  ClassifierConfig c;
  try {
    if (j.contains("kind")) c.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("svm")) {
      const auto& s = j.at("svm");
      c.svm.c = s.value("c", c.svm.c);
      c.svm.step_size = s.value("step_size", c.svm.step_size);
      c.svm.max_iterations = s.value("max_iterations", c.svm.max_iterations);
      c.svm.seed = s.value("seed", c.svm.seed);
    }
    if (j.contains("mlp")) {
      const auto& m = j.at("mlp");
      c.mlp.hidden = m.value("hidden", c.mlp.hidden);
      c.mlp.max_iterations = m.value("max_iterations", c.mlp.max_iterations);
      c.mlp.seed = m.value("seed", c.mlp.seed);
      c.mlp.solver = m.value("solver", std::string("lbfgs")) == "gd" ? MlpSolver::GradientDescent : MlpSolver::Lbfgs;
      c.mlp.learning_rate = m.value("learning_rate", c.mlp.learning_rate);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad classifier config: ") + e.what());
  }
  return c;
}

std::uint32_t Classifier::dimension() const {
  if (const auto* svm = std::get_if<LinearSvmModel>(&model_)) return static_cast<std::uint32_t>(svm->weights.size());
  return static_cast<std::uint32_t>(std::get<MlpModel>(model_).layer_sizes().front());
}

Label Classifier::predict(const features::FeatureVector& x) const {
  return std::visit([&](const auto& m) { return m.predict(x); }, model_);
}

double Classifier::score(const features::FeatureVector& x) const {
  if (const auto* svm = std::get_if<LinearSvmModel>(&model_)) return svm->decision(x);
  return std::get<MlpModel>(model_).probabilities(x)[1] - 0.5;
}

nlohmann::json Classifier::to_json() const {
  nlohmann::json j = {{"format", "classifier"}, {"version", kFormatVersion}, {"kind", to_string(kind())},
                      {"metadata", metadata}};
  std::visit([&](const auto& m) { j["model"] = classify::to_json(m); }, model_);
  return j;
}

Classifier Classifier::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "classifier") throw ParseError("not a classifier model file");
    if (j.at("version").get<int>() != kFormatVersion) throw ParseError("unsupported classifier model version");
    Classifier c;
    if (classifier_kind_from_string(j.at("kind").get<std::string>()) == ClassifierKind::Svm) {
      c.model_ = svm_from_json(j.at("model"));
    } else {
      c.model_ = mlp_from_json(j.at("model"));
    }
    c.metadata = j.value("metadata", nlohmann::json::object());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad classifier model: ") + e.what());
  }
}

void Classifier::save(const std::filesystem::path& path) const { write_file_atomic(path, to_json().dump()); }

Classifier Classifier::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Classifier train_classifier(const ClassifierConfig& config, std::span<const LabeledExample> data) {
  Classifier c = config.kind == ClassifierKind::Svm ? Classifier(train_svm(data, config.svm))
                                                     : Classifier(train_mlp(data, config.mlp));
  c.metadata["config"] = to_json(config);
  c.metadata["training_examples"] = data.size();
  return c;
}

}  // namespace threatwatch::classify
