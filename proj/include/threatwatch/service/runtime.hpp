#pragma once

#include <filesystem>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "threatwatch/common/error.hpp"
#include "threatwatch/service/pipeline.hpp"

namespace threatwatch::service {

class NotFound : public Error {
 public:
  using Error::Error;
};

/// A second retrain was requested while one is running.
class Busy : public Error {
 public:
  using Error::Error;
};

struct RetrainStatus {
  enum class State { Idle, Running, Done, Failed };
  State state = State::Idle;
  /// Version that is (or would have been) produced.
  int version = 0;
  std::size_t examples = 0;
  std::string message;
};

nlohmann::json to_json(const RetrainStatus& s);

/// Thread-safe owner of the pipeline and the label store. Ingestion and
/// model swaps take an exclusive lock, so there is one writer at a time;
/// readers see whole states, never a half-applied post or merge.
class Runtime {
 public:
  Runtime(PipelineConfig config, std::shared_ptr<const ModelBundle> models,
          Pipeline::Start start = Pipeline::Start::Fresh, bool persist = true);
  ~Runtime();

  /// Throws InvalidArgument for a duplicate post id.
  PostRecord ingest(const corpus::Post& post);
  /// Reads a JSONL file; malformed lines and duplicates are reported to
  /// `on_skip` and skipped. Returns the number of posts processed.
  std::size_t ingest_file(const std::filesystem::path& path,
                          const std::function<void(std::size_t line, const std::string& why)>& on_skip);
  void finish();

  struct LabelResult {
    PutResult result;
    LabelRecord record;
  };
  /// Without `text` the post must be known to the pipeline (NotFound otherwise).
  LabelResult label(const std::string& post_id, classify::Label label, LabelSource source,
                    std::optional<std::string> text = std::nullopt, std::optional<Timestamp> posted_at = std::nullopt);

  /// Trains on the current labels (within the horizon) and swaps the model
  /// in. With `wait` the call blocks and rethrows training errors. Throws
  /// Busy while another retrain runs.
  RetrainStatus retrain(bool wait);
  RetrainStatus retrain_status() const;

  /// Drops the asset keyword, excludes labels that only it matched from
  /// future retrains, and retrains (blocking). Throws InvalidArgument for an
  /// unknown or last keyword.
  RetrainStatus remove_asset_keyword(const std::string& keyword);

  /// Runs `f(pipeline, labels)` under a shared lock.
  template <typename F>
  auto read(F&& f) const {
    std::shared_lock lock(mu_);
    return f(static_cast<const Pipeline&>(*pipeline_), static_cast<const LabelStore&>(labels_));
  }

 private:
  std::vector<LabeledPost> training_examples() const;
  void run_retrain(std::vector<LabeledPost> examples, std::shared_ptr<const ModelBundle> current, int version);

  mutable std::shared_mutex mu_;
  std::unique_ptr<Pipeline> pipeline_;
  LabelStore labels_;
  bool persist_;
  std::vector<std::pair<filter::AssetKeywordSet, std::string>> removals_;

  mutable std::mutex retrain_mu_;
  RetrainStatus status_;
  std::future<void> retrain_job_;
};

}  // namespace threatwatch::service
