#include "threatwatch/service/runtime.hpp"

#include <chrono>
#include <fstream>

#include <spdlog/spdlog.h>

#include "threatwatch/common/text_io.hpp"

namespace threatwatch::service {

nlohmann::json to_json(const RetrainStatus& s) {
  static const char* names[] = {"idle", "running", "done", "failed"};
  return {{"status", names[static_cast<int>(s.state)]},
          {"version", s.version},
          {"examples", s.examples},
          {"message", s.message}};
}

Runtime::Runtime(PipelineConfig config, std::shared_ptr<const ModelBundle> models, Pipeline::Start start, bool persist)
    : persist_(persist) {
  if (persist_) labels_ = LabelStore(config.labels_path());
  pipeline_ = std::make_unique<Pipeline>(std::move(config), std::move(models), start, persist);
  if (pipeline_->models()) status_.version = pipeline_->models()->version;
}

Runtime::~Runtime() {
  if (retrain_job_.valid()) retrain_job_.wait();
}

PostRecord Runtime::ingest(const corpus::Post& post) {
  std::unique_lock lock(mu_);
  return pipeline_->process(post);
}

std::size_t Runtime::ingest_file(const std::filesystem::path& path,
                                 const std::function<void(std::size_t, const std::string&)>& on_skip) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input " + path.string());
  std::size_t n = 0, line_no = 0;
  corpus::read_posts_jsonl(
      in,
      [&](corpus::Post p) {
        ++line_no;
        try {
          ingest(p);
          ++n;
        } catch (const InvalidArgument& e) {
          if (on_skip) on_skip(line_no, e.what());
        }
      },
      [&](const corpus::JsonlError& e) {
        line_no = e.line_number;
        if (on_skip) on_skip(e.line_number, e.message);
      });
  return n;
}

void Runtime::finish() {
  if (retrain_job_.valid()) retrain_job_.wait();
  std::unique_lock lock(mu_);
  pipeline_->finish();
}

Runtime::LabelResult Runtime::label(const std::string& post_id, classify::Label label, LabelSource source,
                                    std::optional<std::string> text, std::optional<Timestamp> posted_at) {
  std::unique_lock lock(mu_);
  LabelRecord r;
  r.post_id = post_id;
  r.label = label;
  r.source = source;
  r.labeled_at = std::chrono::time_point_cast<Duration>(std::chrono::system_clock::now());
  if (auto known = pipeline_->find_post(post_id)) {
    r.text = known->text;
    r.posted_at = known->timestamp;
  } else if (!text) {
    throw NotFound("unknown post " + post_id);
  }
  if (text) r.text = *text;
  if (posted_at) r.posted_at = *posted_at;
  if (auto current = labels_.get(post_id); current && current->same_content(r)) return {PutResult::Unchanged, *current};
  const auto result = labels_.put(r);
  return {result, r};
}

std::vector<LabeledPost> Runtime::training_examples() const {
  const auto& cfg = pipeline_->config();
  const auto clock = pipeline_->engine().clock();
  const auto now = clock ? *clock : std::chrono::time_point_cast<Duration>(std::chrono::system_clock::now());
  auto examples = labeled_posts(labels_, horizon_cutoff(now, cfg.retrain_horizon_days));
  for (const auto& [assets, keyword] : removals_) examples = examples_after_keyword_removal(examples, assets, keyword);
  return examples;
}

void Runtime::run_retrain(std::vector<LabeledPost> examples, std::shared_ptr<const ModelBundle> current, int version) {
  try {
    if (!current) throw InvalidArgument("retraining needs an initial model for its TF-IDF space");
    auto next = std::make_shared<ModelBundle>(retrain_models(*current, examples, pipeline_->config()));
    next->version = version;
    {
      std::unique_lock lock(mu_);
      pipeline_->swap_models(next, examples.size());
    }
    if (persist_) save_models(*next, pipeline_->config().model_dir);
    std::lock_guard g(retrain_mu_);
    status_ = {RetrainStatus::State::Done, version, examples.size(), next->description};
    spdlog::info("model v{} in service ({} labels)", version, examples.size());
  } catch (const std::exception& e) {
    std::lock_guard g(retrain_mu_);
    status_ = {RetrainStatus::State::Failed, version, examples.size(), e.what()};
    spdlog::warn("retrain failed: {}", e.what());
    throw;
  }
}

RetrainStatus Runtime::retrain(bool wait) {
  std::vector<LabeledPost> examples;
  std::shared_ptr<const ModelBundle> current;
  int version = 0;
  {
    std::lock_guard g(retrain_mu_);
    if (status_.state == RetrainStatus::State::Running) throw Busy("a retrain is already running");
    if (retrain_job_.valid()) retrain_job_.wait();
    {
      std::shared_lock lock(mu_);
      examples = training_examples();
      current = pipeline_->models();
    }
    version = (current ? current->version : 0) + 1;
    status_ = {RetrainStatus::State::Running, version, examples.size(), ""};
  }
  if (wait) {
    run_retrain(std::move(examples), std::move(current), version);
    return retrain_status();
  }
  auto job = std::async(std::launch::async, [this, examples = std::move(examples), current, version]() mutable {
    try {
      run_retrain(std::move(examples), std::move(current), version);
    } catch (const std::exception&) {
      // Already recorded in the status.
    }
  });
  std::lock_guard g(retrain_mu_);
  retrain_job_ = std::move(job);
  return status_;
}

RetrainStatus Runtime::retrain_status() const {
  std::lock_guard g(retrain_mu_);
  return status_;
}

RetrainStatus Runtime::remove_asset_keyword(const std::string& keyword) {
  {
    std::unique_lock lock(mu_);
    const auto before = pipeline_->asset_keywords();
    const auto key = to_lower_ascii(trim(keyword));
    std::vector<std::string> remaining;
    for (const auto& k : before.keywords()) {
      if (k != key) remaining.push_back(k);
    }
    if (remaining.size() == before.keywords().size()) throw NotFound("unknown asset keyword '" + keyword + "'");
    if (remaining.empty()) throw InvalidArgument("cannot remove the last asset keyword");
    pipeline_->set_asset_keywords(filter::AssetKeywordSet(remaining));
    removals_.emplace_back(before, key);
  }
  return retrain(true);
}

}  // namespace threatwatch::service
