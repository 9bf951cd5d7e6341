#include "threatwatch/classify/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/random.hpp"

namespace threatwatch::classify {
namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

using Objective = std::function<double(const std::vector<double>&, std::vector<double>&)>;

// Limited-memory BFGS with a backtracking Armijo line search.
void lbfgs_minimize(const Objective& f, std::vector<double>& x, int max_iterations, double tolerance) {
  constexpr std::size_t kMemory = 10;
  const std::size_t n = x.size();
  std::vector<double> g(n), g_new(n), d(n), x_new(n);
  double fx = f(x, g);
  std::deque<std::pair<std::vector<double>, std::vector<double>>> history;  // (s, y)

  for (int iter = 0; iter < max_iterations; ++iter) {
    if (std::sqrt(dot(g, g)) < tolerance) return;

    // Two-loop recursion for d = -H g.
    d = g;
    std::vector<double> alpha(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& [s, y] = history[k];
      alpha[k] = dot(s, d) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * y[i];
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      double gamma = dot(s, y) / dot(y, y);
      for (auto& v : d) v *= gamma;
    } else {
      double gn = std::sqrt(dot(g, g));
      for (auto& v : d) v /= std::max(gn, 1.0);
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& [s, y] = history[k];
      double beta = dot(y, d) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) d[i] += s[i] * (alpha[k] - beta);
    }
    for (auto& v : d) v = -v;

    double slope = dot(g, d);
    if (slope >= 0.0) {
      // Not a descent direction; restart from steepest descent.
      history.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = -dot(g, g);
    }

    double step = 1.0, f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return;

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    if (dot(s, y) > 1e-12) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > kMemory) history.pop_front();
    }
    const double change = std::abs(fx - f_new) / std::max({std::abs(fx), std::abs(f_new), 1.0});
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    if (change < tolerance * 1e-3) return;
  }
}

}  // namespace

MlpModel::MlpModel(std::vector<int> layer_sizes) : layer_sizes_(std::move(layer_sizes)) {
  if (layer_sizes_.size() < 2) throw InvalidArgument("an MLP needs at least input and output layers");
  if (layer_sizes_.back() != 2) throw InvalidArgument("the output layer must have two units");
  for (int s : layer_sizes_) {
    if (s < 1) throw InvalidArgument("layer sizes must be positive");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    offsets_.push_back(offset);
    offset += static_cast<std::size_t>(layer_sizes_[l] + 1) * static_cast<std::size_t>(layer_sizes_[l + 1]);
  }
  params_.assign(offset, 0.0);
}

MlpModel MlpModel::random_init(std::vector<int> layer_sizes, std::uint64_t seed) {
  MlpModel m(std::move(layer_sizes));
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < m.layer_sizes_.size(); ++l) {
    const std::size_t in = m.layer_sizes_[l], out = m.layer_sizes_[l + 1];
    const double r = std::sqrt(6.0 / static_cast<double>(in + out));
    double* w = m.params_.data() + m.offsets_[l];
    for (std::size_t k = 0; k < in * out; ++k) w[k] = rng.uniform(-r, r);
  }
  return m;
}

void MlpModel::forward(const features::FeatureVector& x, std::vector<std::vector<double>>& a) const {
  if (x.dimension() != static_cast<std::uint32_t>(layer_sizes_[0])) throw InvalidArgument("dimension mismatch");
  const std::size_t layers = layer_sizes_.size();
  a.resize(layers);
  for (std::size_t l = 1; l < layers; ++l) {
    const std::size_t in = layer_sizes_[l - 1], out = layer_sizes_[l];
    const double* w = params_.data() + offsets_[l - 1];
    const double* b = w + in * out;
    auto& z = a[l];
    z.assign(b, b + out);
    if (l == 1) {
      for (const auto& [i, v] : x.entries()) {
        const double* row = w + static_cast<std::size_t>(i) * out;
        for (std::size_t j = 0; j < out; ++j) z[j] += v * row[j];
      }
    } else {
      const auto& prev = a[l - 1];
      for (std::size_t i = 0; i < in; ++i) {
        const double* row = w + i * out;
        for (std::size_t j = 0; j < out; ++j) z[j] += prev[i] * row[j];
      }
    }
    if (l + 1 < layers) {
      for (auto& v : z) v = logistic(v);
    } else {
      const double m = std::max(z[0], z[1]);
      const double e0 = std::exp(z[0] - m), e1 = std::exp(z[1] - m);
      z[0] = e0 / (e0 + e1);
      z[1] = e1 / (e0 + e1);
    }
  }
}

std::array<double, 2> MlpModel::probabilities(const features::FeatureVector& x) const {
  std::vector<std::vector<double>> a;
  forward(x, a);
  return {a.back()[0], a.back()[1]};
}

Label MlpModel::predict(const features::FeatureVector& x) const {
  return probabilities(x)[1] >= 0.5 ? Label::Positive : Label::Negative;
}

double MlpModel::loss_and_gradient(std::span<const LabeledExample> data, std::vector<double>* grad) const {
  if (data.empty()) throw InvalidArgument("empty data");
  if (grad) grad->assign(params_.size(), 0.0);
  const std::size_t layers = layer_sizes_.size();
  std::vector<std::vector<double>> a;
  std::vector<double> delta, prev_delta;
  double loss = 0.0;
  for (const auto& ex : data) {
    forward(ex.vector, a);
    const std::size_t target = ex.label == Label::Positive ? 1 : 0;
    loss -= std::log(std::max(a.back()[target], 1e-300));
    if (!grad) continue;

    delta = a.back();
    delta[target] -= 1.0;
    for (std::size_t l = layers - 1; l >= 1; --l) {
      const std::size_t in = layer_sizes_[l - 1], out = layer_sizes_[l];
      const double* w = params_.data() + offsets_[l - 1];
      double* gw = grad->data() + offsets_[l - 1];
      double* gb = gw + in * out;
      for (std::size_t j = 0; j < out; ++j) gb[j] += delta[j];
      if (l == 1) {
        for (const auto& [i, v] : ex.vector.entries()) {
          double* row = gw + static_cast<std::size_t>(i) * out;
          for (std::size_t j = 0; j < out; ++j) row[j] += v * delta[j];
        }
        break;
      }
      const auto& prev = a[l - 1];
      prev_delta.assign(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        double* grow = gw + i * out;
        const double* wrow = w + i * out;
        double back = 0.0;
        for (std::size_t j = 0; j < out; ++j) {
          grow[j] += prev[i] * delta[j];
          back += wrow[j] * delta[j];
        }
        prev_delta[i] = back * prev[i] * (1.0 - prev[i]);
      }
      delta.swap(prev_delta);
    }
  }
  const double n = static_cast<double>(data.size());
  if (grad) {
    for (auto& g : *grad) g /= n;
  }
  return loss / n;
}

MlpModel train_mlp(std::span<const LabeledExample> data, const MlpParams& params) {
  if (params.max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  const auto dim = check_training_set(data);
  std::vector<int> sizes = {static_cast<int>(dim)};
  sizes.insert(sizes.end(), params.hidden.begin(), params.hidden.end());
  sizes.push_back(2);
  MlpModel model = MlpModel::random_init(sizes, params.seed);
  model.params = params;

  MlpModel scratch = model;
  Objective f = [&](const std::vector<double>& x, std::vector<double>& g) {
    scratch.parameters() = x;
    return scratch.loss_and_gradient(data, &g);
  };

  auto& x = model.parameters();
  if (params.solver == MlpSolver::Lbfgs) {
    lbfgs_minimize(f, x, params.max_iterations, params.tolerance);
  } else {
    std::vector<double> g;
    for (int iter = 0; iter < params.max_iterations; ++iter) {
      f(x, g);
      if (std::sqrt(dot(g, g)) < params.tolerance) break;
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= params.learning_rate * g[i];
    }
  }
  return model;
}

nlohmann::json to_json(const MlpModel& m) {
  return {{"layer_sizes", m.layer_sizes()},
          {"parameters", m.parameters()},
          {"params",
           {{"hidden", m.params.hidden},
            {"max_iterations", m.params.max_iterations},
            {"seed", m.params.seed},
            {"solver", m.params.solver == MlpSolver::Lbfgs ? "lbfgs" : "gd"},
            {"learning_rate", m.params.learning_rate},
            {"tolerance", m.params.tolerance}}}};
}

MlpModel mlp_from_json(const nlohmann::json& j) {
  try {
    MlpModel m(j.at("layer_sizes").get<std::vector<int>>());
    auto params = j.at("parameters").get<std::vector<double>>();
    if (params.size() != m.parameters().size()) throw ParseError("MLP parameter count does not match layer sizes");
    m.parameters() = std::move(params);
    const auto& p = j.at("params");
    m.params.hidden = p.at("hidden").get<std::vector<int>>();
    m.params.max_iterations = p.at("max_iterations").get<int>();
    m.params.seed = p.at("seed").get<std::uint64_t>();
    m.params.solver = p.at("solver") == "gd" ? MlpSolver::GradientDescent : MlpSolver::Lbfgs;
    m.params.learning_rate = p.at("learning_rate").get<double>();
    m.params.tolerance = p.at("tolerance").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad MLP model: ") + e.what());
  }
}

}  // namespace threatwatch::classify
