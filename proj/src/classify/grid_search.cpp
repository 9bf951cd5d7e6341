#include "threatwatch/classify/grid_search.hpp"

#include <sstream>

#include "threatwatch/classify/pareto.hpp"
#include "threatwatch/common/error.hpp"
#include "threatwatch/features/tfidf.hpp"

namespace threatwatch::classify {

std::string GridRow::label() const { return config.describe() + " dim=" + std::to_string(dimension); }

std::string GridReport::to_csv() const {
  std::ostringstream out;
  out << "classifier,config,dimension,tpr,tnr,dominant,chosen\n";
  for (const auto& r : rows) {
    out << to_string(r.config.kind) << ",\"" << r.config.describe() << "\"," << r.dimension << "," << r.tpr << ","
        << r.tnr << "," << (r.dominant ? "true" : "false") << "," << (r.chosen ? "true" : "false") << "\n";
  }
  return out.str();
}

GridReport grid_search(std::span<const std::vector<std::string>> tokens, std::span<const Label> labels,
                       const GridSpec& spec) {
  if (tokens.size() != labels.size()) throw InvalidArgument("tokens and labels differ in length");
  std::vector<ClassifierConfig> configs;
  if (spec.include_svm) {
    for (double c : spec.svm_c) {
      for (double step : spec.svm_step) {
        ClassifierConfig cfg = spec.base;
        cfg.kind = ClassifierKind::Svm;
        cfg.svm.c = c;
        cfg.svm.step_size = step;
        configs.push_back(cfg);
      }
    }
  }
  if (spec.include_mlp) {
    for (int layers : spec.mlp_layers) {
      for (int neurons : spec.mlp_neurons) {
        ClassifierConfig cfg = spec.base;
        cfg.kind = ClassifierKind::Mlp;
        cfg.mlp.hidden.assign(static_cast<std::size_t>(layers), neurons);
        configs.push_back(cfg);
      }
    }
  }

  GridReport report;
  for (auto dim : spec.dimensions) {
    for (const auto& cfg : configs) {
      auto cv = cross_validate(labels, spec.folds, spec.seed, [&](auto train_idx, auto test_idx) {
        std::vector<std::vector<std::string>> train_tokens;
        for (auto i : train_idx) train_tokens.push_back(tokens[i]);
        auto tfidf = features::TfIdfModel::fit(std::span<const std::vector<std::string>>(train_tokens), dim);
        std::vector<LabeledExample> train_set, test_set;
        for (auto i : train_idx) train_set.push_back({tfidf.transform(tokens[i]), labels[i], {}});
        for (auto i : test_idx) test_set.push_back({tfidf.transform(tokens[i]), labels[i], {}});
        auto model = train_classifier(cfg, train_set);
        return evaluate([&](const features::FeatureVector& x) { return model.predict(x); }, test_set);
      });
      report.rows.push_back({cfg, dim, cv.mean_tpr, cv.mean_tnr, false, false});
    }
  }

  for (auto kind : {ClassifierKind::Svm, ClassifierKind::Mlp}) {
    std::vector<std::size_t> idx;
    std::vector<ScoredConfig> scored;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      if (report.rows[i].config.kind != kind) continue;
      idx.push_back(i);
      scored.push_back({report.rows[i].label(), report.rows[i].tpr, report.rows[i].tnr});
    }
    if (scored.empty()) continue;
    auto sel = pareto_select(scored);
    for (auto d : sel.dominant) report.rows[idx[d]].dominant = true;
    report.rows[idx[sel.chosen]].chosen = true;
    (kind == ClassifierKind::Svm ? report.chosen_svm : report.chosen_mlp) = idx[sel.chosen];
  }
  return report;
}

}  // namespace threatwatch::classify
