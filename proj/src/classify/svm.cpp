#include "threatwatch/classify/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/random.hpp"

namespace threatwatch::classify {

std::string_view to_string(Label l) { return l == Label::Positive ? "positive" : "negative"; }

Label label_from_string(std::string_view s) {
  if (s == "positive" || s == "relevant" || s == "1") return Label::Positive;
  if (s == "negative" || s == "irrelevant" || s == "0") return Label::Negative;
  throw InvalidArgument("unknown label '" + std::string(s) + "'");
}

std::uint32_t check_training_set(std::span<const LabeledExample> data) {
  bool pos = false, neg = false;
  for (const auto& e : data) (e.label == Label::Positive ? pos : neg) = true;
  if (!pos || !neg) throw InvalidArgument("degenerate training set");
  const auto dim = data.front().vector.dimension();
  for (const auto& e : data) {
    if (e.vector.dimension() != dim) throw InvalidArgument("training vectors have mixed dimensions");
  }
  return dim;
}

double LinearSvmModel::decision(const features::FeatureVector& x) const {
  if (x.dimension() != weights.size()) throw InvalidArgument("dimension mismatch");
  return x.dot(weights) + bias;
}

LinearSvmModel train_svm(std::span<const LabeledExample> data, const SvmParams& params) {
  if (params.c <= 0.0 || params.step_size <= 0.0) throw InvalidArgument("C and step size must be positive");
  if (params.max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  const auto dim = check_training_set(data);
  const double n = static_cast<double>(data.size());
  const double lambda = 1.0 / (params.c * n);

  // w = scale * v, so the L2 shrink is O(1) per step on sparse inputs.
  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(params.seed);

  for (int t = 1; t <= params.max_iterations; ++t) {
    const double eta = params.step_size / std::sqrt(static_cast<double>(t));
    rng.shuffle(std::span<std::size_t>(order));
    for (auto idx : order) {
      const auto& ex = data[idx];
      const double y = sign_of(ex.label);
      const double margin = y * (scale * ex.vector.dot(v) + bias);
      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        ex.vector.add_to(v, eta * y / scale);
        bias += eta * y;
      }
      if (scale < 1e-9) {
        for (auto& x : v) x *= scale;
        scale = 1.0;
      }
    }
  }

  LinearSvmModel model;
  model.weights.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) model.weights[i] = scale * v[i];
  model.bias = bias;
  model.params = params;
  return model;
}

nlohmann::json to_json(const LinearSvmModel& m) {
  return {{"weights", m.weights},
          {"bias", m.bias},
          {"params",
           {{"c", m.params.c},
            {"step_size", m.params.step_size},
            {"max_iterations", m.params.max_iterations},
            {"seed", m.params.seed}}}};
}

LinearSvmModel svm_from_json(const nlohmann::json& j) {
  try {
    LinearSvmModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    const auto& p = j.at("params");
    m.params = {p.at("c").get<double>(), p.at("step_size").get<double>(), p.at("max_iterations").get<int>(),
                p.at("seed").get<std::uint64_t>()};
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad SVM model: ") + e.what());
  }
}

}  // namespace threatwatch::classify
