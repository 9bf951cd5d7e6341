#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "threatwatch/service/http_api.hpp"
#include "threatwatch/service/metrics.hpp"
#include "threatwatch/service/runtime.hpp"
#include "threatwatch/synth/stream.hpp"

using namespace threatwatch;
using namespace threatwatch::service;
namespace fs = std::filesystem;

namespace {

HttpApi* g_api = nullptr;

void on_signal(int) {
  if (g_api) g_api->stop();
}

void configure_logging() {
  spdlog::set_default_logger(spdlog::stderr_color_mt("threatwatch"));
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e %^%l%$ %v");
  if (const char* level = std::getenv("THREATWATCH_LOG_LEVEL"); level && *level)
    spdlog::set_level(spdlog::level::from_str(level));
}

PipelineConfig load_config(const std::string& path) {
  auto c = load_config_from_environment(path.empty() ? std::nullopt : std::optional<fs::path>(path));
  c.validate();
  return c;
}

std::shared_ptr<const ModelBundle> load_models_for(const PipelineConfig& c) {
  if (fs::exists(c.model_dir / "classifier.json")) {
    auto m = std::make_shared<ModelBundle>(load_models(c.model_dir));
    spdlog::info("model v{} ({}) from {}", m->version, m->description, c.model_dir.string());
    return m;
  }
  if (c.bootstrap) {
    spdlog::info("no model in {}; bootstrap mode routes every filtered post to the queue", c.model_dir.string());
    return nullptr;
  }
  throw Error("no trained model in " + c.model_dir.string() + "; run `threatwatch train` or set \"bootstrap\": true");
}

int serve(Runtime& rt, const std::string& addr) {
  const auto [host, port] = parse_listen_address(addr);
  HttpApi api(rt);
  g_api = &api;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  spdlog::info("listening on {}:{}", host, port);
  const bool ok = api.listen(host, port);
  g_api = nullptr;
  rt.finish();
  if (!ok) {
    spdlog::error("cannot listen on {}", addr);
    return 1;
  }
  return 0;
}

void print(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Security threat monitoring over short-text streams"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Pipeline config JSON (default: THREATWATCH_CONFIG or bundled defaults)");
  };

  auto* ingest = app.add_subcommand("ingest", "Run posts through the pipeline");
  add_config(ingest);
  std::string input, listen;
  bool resume = false;
  auto* input_opt = ingest->add_option("--input", input, "JSONL file of posts");
  auto* listen_opt = ingest->add_option("--listen", listen, "Accept POST /posts on host:port instead");
  input_opt->excludes(listen_opt);
  ingest->add_flag("--resume", resume, "Continue from the existing event log");

  auto* train = app.add_subcommand("train", "Train the TF-IDF model and classifier on a labeled corpus");
  add_config(train);
  std::string corpus_path, out_dir;
  bool grid = false, svm_only = false, mlp_only = false;
  std::size_t folds = 10;
  train->add_option("--corpus", corpus_path, "JSONL posts with a \"label\" field")->required()->check(CLI::ExistingFile);
  train->add_flag("--grid", grid, "Search hyperparameters and feature dimensions, keep the Pareto choice");
  train->add_flag("--svm-only", svm_only, "Restrict the grid to SVMs");
  train->add_flag("--mlp-only", mlp_only, "Restrict the grid to MLPs");
  train->add_option("--folds", folds, "Cross-validation folds (0 to skip)");
  train->add_option("--out", out_dir, "Model directory (default: model_dir from the config)");

  auto* evaluate = app.add_subcommand("evaluate", "Re-cluster a log's relevant posts and print daily metrics");
  std::string log_path;
  bool no_reclustering = false;
  evaluate->add_option("--log", log_path, "Event log")->required()->check(CLI::ExistingFile);
  evaluate->add_flag("--no-reclustering", no_reclustering, "Keep the online assignment only");

  auto* report = app.add_subcommand("report", "Volume reduction and cluster durations of a log");
  report->add_option("--log", log_path, "Event log")->required()->check(CLI::ExistingFile);

  auto* serve_cmd = app.add_subcommand("serve", "HTTP API over the pipeline state");
  add_config(serve_cmd);
  std::string addr;
  serve_cmd->add_option("--addr", addr, "host:port (default: config listen or THREATWATCH_ADDR)");
  serve_cmd->add_flag("--resume", resume, "Continue from the existing event log");

  auto* export_cmd = app.add_subcommand("export", "Write IoC events of the current state");
  add_config(export_cmd);
  std::string format = "misp-json";
  bool active_only = false;
  export_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"misp-json"}));
  export_cmd->add_option("--out", out_dir, "Output directory")->required();
  export_cmd->add_flag("--active-only", active_only, "Skip archived clusters");

  auto* generate = app.add_subcommand("generate", "Write a synthetic post stream");
  synth::StreamOptions stream;
  std::string start = "2016-06-01T00:00:00Z";
  bool with_labels = false;
  generate->add_option("--posts", stream.posts, "Number of posts");
  generate->add_option("--redundancy", stream.redundancy, "Copies per threat");
  generate->add_option("--noise", stream.noise_fraction, "Fraction of irrelevant posts")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--days", stream.days, "Stream length in days");
  generate->add_option("--seed", stream.seed, "Random seed");
  generate->add_option("--start", start, "First timestamp (RFC 3339)");
  generate->add_flag("--labels", with_labels, "Add the generating label to every post");
  generate->add_option("--out", out_dir, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      auto c = load_config(config_path);
      Runtime rt(c, load_models_for(c), resume ? Pipeline::Start::Resume : Pipeline::Start::Fresh);
      if (!listen.empty()) return serve(rt, listen);
      const fs::path file = input.empty() ? c.input : fs::path(input);
      if (file.empty()) throw InvalidArgument("no input: pass --input, --listen or set \"input\" in the config");
      const auto n = rt.ingest_file(file, [](std::size_t line, const std::string& why) {
        spdlog::warn("line {} skipped: {}", line, why);
      });
      rt.finish();
      spdlog::info("{} posts processed; log {}", n, c.event_log_path().string());
      print(rt.read([](const Pipeline& p, const LabelStore&) { return p.reduction().to_json(); }));
    } else if (train->parsed()) {
      auto c = load_config(config_path);
      TrainOptions opt;
      opt.grid = grid;
      opt.cv_folds = folds;
      opt.grid_spec.include_svm = !mlp_only;
      opt.grid_spec.include_mlp = !svm_only;
      if (grid && svm_only) c.classifier.kind = classify::ClassifierKind::Svm;
      if (grid && mlp_only) c.classifier.kind = classify::ClassifierKind::Mlp;
      const auto corpus = read_labeled_corpus(corpus_path);
      spdlog::info("training on {} labeled posts", corpus.size());
      const auto result = train_models(c, corpus, opt);
      const fs::path dir = out_dir.empty() ? c.model_dir : fs::path(out_dir);
      save_models(result.models, dir);
      if (result.grid) std::ofstream(dir / "grid.csv") << result.grid->to_csv();
      spdlog::info("models written to {}", dir.string());
      print(result.report());
    } else if (evaluate->parsed()) {
      const auto rows = evaluate_clustering(log_path, no_reclustering ? std::optional<bool>(false) : std::nullopt);
      print(to_json(std::span<const DailyClusterMetrics>(rows)));
    } else if (report->parsed()) {
      auto engine = replay_cluster_state(log_path);
      nlohmann::json j = reduction_report_from_log(log_path).to_json();
      j["durations"] = duration_report(*engine).to_json();
      print(j);
    } else if (serve_cmd->parsed()) {
      auto c = load_config(config_path);
      Runtime rt(c, load_models_for(c), resume ? Pipeline::Start::Resume : Pipeline::Start::Fresh);
      return serve(rt, addr.empty() ? c.listen : addr);
    } else if (export_cmd->parsed()) {
      auto c = load_config(config_path);
      if (!fs::exists(c.event_log_path())) throw Error("no event log at " + c.event_log_path().string());
      Pipeline p(c, load_models_for(c), Pipeline::Start::Resume, false);
      const auto n = p.export_iocs(out_dir, !active_only);
      spdlog::info("{} events written to {}", n, out_dir);
    } else if (generate->parsed()) {
      stream.start = parse_rfc3339(start);
      const auto posts = synth::redundancy_stream(stream);
      std::ofstream file;
      if (!out_dir.empty()) {
        file.open(out_dir);
        if (!file) throw Error("cannot write " + out_dir);
      }
      std::ostream& out = out_dir.empty() ? std::cout : file;
      if (with_labels) {
        std::vector<LabeledPost> labeled;
        for (const auto& s : posts)
          labeled.push_back({s.post, s.relevant ? classify::Label::Positive : classify::Label::Negative});
        write_labeled_corpus(out, labeled);
      } else {
        synth::write_jsonl(out, posts);
      }
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
