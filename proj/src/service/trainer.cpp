#include "threatwatch/service/trainer.hpp"

#include <algorithm>
#include <fstream>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/text_io.hpp"
#include "threatwatch/corpus/normalize.hpp"

namespace threatwatch::service {
namespace {

struct Prepared {
  std::vector<std::vector<std::string>> tokens;
  std::vector<classify::Label> labels;
};

Prepared prepare(const PipelineConfig& config, std::span<const LabeledPost> corpus) {
  const auto stopwords = corpus::StopwordList::load(config.stopwords);
  Prepared out;
  for (const auto& lp : corpus) {
    auto tokens = corpus::normalize_text(lp.post.text, stopwords, config.normalize);
    if (tokens.empty()) continue;
    out.tokens.push_back(std::move(tokens));
    out.labels.push_back(lp.label);
  }
  return out;
}

std::vector<classify::LabeledExample> vectorize(const features::TfIdfModel& model,
                                                std::span<const std::vector<std::string>> tokens,
                                                std::span<const classify::Label> labels,
                                                std::span<const std::size_t> which) {
  std::vector<classify::LabeledExample> out;
  out.reserve(which.size());
  for (auto i : which) out.push_back({model.transform(tokens[i]), labels[i], {}});
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

void require_both_classes(std::span<const classify::Label> labels) {
  const auto pos = std::count(labels.begin(), labels.end(), classify::Label::Positive);
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size()))
    throw InvalidArgument("training needs both relevant and irrelevant posts, got " + std::to_string(pos) +
                          " relevant of " + std::to_string(labels.size()));
}

}  // namespace

std::vector<LabeledPost> read_labeled_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path.string());
  std::vector<LabeledPost> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({corpus::post_from_json(j), classify::label_from_string(j.at("label").get<std::string>())});
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void write_labeled_corpus(std::ostream& out, std::span<const LabeledPost> posts) {
  for (const auto& lp : posts) {
    auto j = corpus::to_json(lp.post);
    j["label"] = lp.label == classify::Label::Positive ? "relevant" : "irrelevant";
    out << j.dump() << '\n';
  }
}

void save_models(const ModelBundle& models, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  models.tfidf.save(dir / "tfidf.json");
  auto c = models.classifier;
  c.metadata["version"] = models.version;
  c.metadata["description"] = models.description;
  c.save(dir / "classifier.json");
}

ModelBundle load_models(const std::filesystem::path& dir) {
  ModelBundle m{features::TfIdfModel::load(dir / "tfidf.json"), classify::Classifier::load(dir / "classifier.json"), 1, {}};
  if (m.classifier.dimension() != m.tfidf.dimension())
    throw InvalidArgument("classifier and TF-IDF model dimensions differ in " + dir.string());
  m.version = m.classifier.metadata.value("version", 1);
  m.description = m.classifier.metadata.value("description", std::string());
  return m;
}

classify::CrossValidationResult cross_validate_pipeline(const classify::ClassifierConfig& classifier,
                                                        std::uint32_t dimension,
                                                        std::span<const std::vector<std::string>> tokens,
                                                        std::span<const classify::Label> labels, std::size_t folds,
                                                        std::uint64_t seed) {
  return classify::cross_validate(labels, folds, seed, [&](auto train, auto validation) {
    std::vector<std::vector<std::string>> train_tokens;
    for (auto i : train) train_tokens.push_back(tokens[i]);
    const auto model = features::TfIdfModel::fit(std::span<const std::vector<std::string>>(train_tokens), dimension);
    const auto train_set = vectorize(model, tokens, labels, train);
    const auto test_set = vectorize(model, tokens, labels, validation);
    const auto trained = classify::train_classifier(classifier, train_set);
    return classify::evaluate([&](const features::FeatureVector& x) { return trained.predict(x); }, test_set);
  });
}

TrainResult train_models(const PipelineConfig& config, std::span<const LabeledPost> corpus,
                         const TrainOptions& options) {
  auto data = prepare(config, corpus);
  require_both_classes(data.labels);
  TrainResult result;
  for (auto l : data.labels) ++(l == classify::Label::Positive ? result.positives : result.negatives);

  result.config = config.classifier;
  result.dimension = config.feature_dimension;
  if (options.grid) {
    auto spec = options.grid_spec;
    spec.base = config.classifier;
    result.grid = classify::grid_search(data.tokens, data.labels, spec);
    auto chosen = config.classifier.kind == classify::ClassifierKind::Svm ? result.grid->chosen_svm : result.grid->chosen_mlp;
    if (!chosen) chosen = result.grid->chosen_svm ? result.grid->chosen_svm : result.grid->chosen_mlp;
    if (!chosen) throw Error("grid search produced no configuration");
    result.config = result.grid->rows[*chosen].config;
    result.dimension = result.grid->rows[*chosen].dimension;
  }
  if (options.cv_folds > 0) {
    result.cv = cross_validate_pipeline(result.config, result.dimension, data.tokens, data.labels,
                                        options.cv_folds, options.cv_seed);
  }
  auto tfidf = features::TfIdfModel::fit(std::span<const std::vector<std::string>>(data.tokens), result.dimension);
  const auto examples = vectorize(tfidf, data.tokens, data.labels, all_indices(data.tokens.size()));
  auto classifier = classify::train_classifier(result.config, examples);
  result.models = ModelBundle{std::move(tfidf), std::move(classifier), 1, result.config.describe() + " dim=" + std::to_string(result.dimension)};
  return result;
}

nlohmann::json TrainResult::report() const {
  nlohmann::json j = {{"config", classify::to_json(config)},
                      {"description", models.description},
                      {"dimension", dimension},
                      {"positives", positives},
                      {"negatives", negatives}};
  if (cv) j["cross_validation"] = {{"folds", cv->folds.size()}, {"mean_tpr", cv->mean_tpr}, {"mean_tnr", cv->mean_tnr}};
  if (grid) {
    j["grid_rows"] = grid->rows.size();
    std::size_t dominant = 0;
    for (const auto& r : grid->rows) dominant += r.dominant;
    j["grid_dominant"] = dominant;
  }
  return j;
}

std::optional<Timestamp> horizon_cutoff(Timestamp now, std::optional<int> horizon_days) {
  if (!horizon_days) return std::nullopt;
  return now - days(*horizon_days);
}

std::vector<LabeledPost> labeled_posts(const LabelStore& labels, std::optional<Timestamp> cutoff) {
  std::vector<LabeledPost> out;
  for (const auto& r : labels.current()) {
    if (cutoff && r.posted_at < *cutoff) continue;
    corpus::Post p;
    p.id = r.post_id;
    p.timestamp = r.posted_at;
    p.text = r.text;
    out.push_back({std::move(p), r.label});
  }
  return out;
}

ModelBundle retrain_models(const ModelBundle& current, std::span<const LabeledPost> examples,
                           const PipelineConfig& config) {
  auto data = prepare(config, examples);
  require_both_classes(data.labels);
  const auto vectors = vectorize(current.tfidf, data.tokens, data.labels, all_indices(data.tokens.size()));
  classify::check_training_set(vectors);
  auto classifier = classify::train_classifier(config.classifier, vectors);
  return ModelBundle{current.tfidf, std::move(classifier), current.version + 1,
                     config.classifier.describe() + " retrained on " + std::to_string(vectors.size()) + " labels"};
}

std::vector<LabeledPost> examples_after_keyword_removal(std::span<const LabeledPost> examples,
                                                        const filter::AssetKeywordSet& assets,
                                                        const std::string& keyword) {
  const auto removed = to_lower_ascii(trim(keyword));
  std::vector<std::string> remaining;
  for (const auto& k : assets.keywords()) {
    if (k != removed) remaining.push_back(k);
  }
  if (remaining.size() == assets.keywords().size()) throw InvalidArgument("unknown asset keyword '" + keyword + "'");
  std::vector<LabeledPost> out;
  for (const auto& ex : examples) {
    const auto matched = filter::matched_assets(ex.post.text, assets);
    const bool only_removed = !matched.empty() && std::all_of(matched.begin(), matched.end(), [&](const auto& m) { return m == removed; });
    if (!only_removed) out.push_back(ex);
  }
  return out;
}

}  // namespace threatwatch::service
