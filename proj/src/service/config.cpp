#include "threatwatch/service/config.hpp"

#include <cstdlib>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/text_io.hpp"
#include "threatwatch/corpus/stopwords.hpp"
#include "threatwatch/filter/keywords.hpp"
#include "threatwatch/ioc/taxonomy.hpp"

namespace threatwatch::service {
namespace fs = std::filesystem;

std::string_view to_string(cluster::OfflineMode m) {
  switch (m) {
    case cluster::OfflineMode::Batch:
      return "batch";
    case cluster::OfflineMode::Background:
      return "background";
    case cluster::OfflineMode::Manual:
      return "manual";
  }
  return "batch";
}

cluster::OfflineMode offline_mode_from_string(std::string_view s) {
  if (s == "batch") return cluster::OfflineMode::Batch;
  if (s == "background") return cluster::OfflineMode::Background;
  if (s == "manual") return cluster::OfflineMode::Manual;
  throw InvalidArgument("unknown offline mode '" + std::string(s) + "'");
}

PipelineConfig PipelineConfig::defaults(const fs::path& root) {
  PipelineConfig c;
  const auto data = bundled_data_dir();
  c.asset_keywords = data / "assets.txt";
  c.stopwords = data / "stopwords.txt";
  c.security_keywords = data / "security_keywords.txt";
  c.taxonomy_rules = data / "taxonomy_rules.json";
  c.model_dir = root / "models";
  c.state_dir = root / "state";
  return c;
}

PipelineConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  auto c = PipelineConfig::defaults(base_dir);
  auto path = [&](const char* key, fs::path& out) {
    if (!j.contains(key)) return;
    fs::path p = j.at(key).get<std::string>();
    out = p.is_absolute() ? p : base_dir / p;
  };
  try {
    path("asset_keywords", c.asset_keywords);
    path("stopwords", c.stopwords);
    path("security_keywords", c.security_keywords);
    path("taxonomy_rules", c.taxonomy_rules);
    path("model_dir", c.model_dir);
    path("state_dir", c.state_dir);
    path("input", c.input);
    if (j.contains("listen")) c.listen = j["listen"].get<std::string>();
    if (j.contains("feature_dimension")) c.feature_dimension = j["feature_dimension"].get<std::uint32_t>();
    if (j.contains("classifier")) c.classifier = classify::classifier_config_from_json(j["classifier"]);
    if (j.contains("clustering")) c.clustering = cluster::clustering_config_from_json(j["clustering"]);
    if (j.contains("offline_mode")) c.engine.mode = offline_mode_from_string(j["offline_mode"].get<std::string>());
    if (j.contains("offline_batch")) c.engine.offline_batch = j["offline_batch"].get<std::size_t>();
    if (j.contains("drop_hashtags")) c.normalize.drop_hashtags = j["drop_hashtags"].get<bool>();
    if (j.contains("bootstrap")) c.bootstrap = j["bootstrap"].get<bool>();
    if (j.contains("retrain_horizon_days") && !j["retrain_horizon_days"].is_null())
      c.retrain_horizon_days = j["retrain_horizon_days"].get<int>();
    if (j.contains("snapshot_every")) c.snapshot_every = j["snapshot_every"].get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (c.feature_dimension == 0) throw InvalidArgument("config: feature_dimension must be positive");
  if (c.retrain_horizon_days && *c.retrain_horizon_days <= 0)
    throw InvalidArgument("config: retrain_horizon_days must be positive");
  c.clustering.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return config_from_json(j, fs::absolute(file).parent_path());
}

void PipelineConfig::validate() const {
  auto need = [](const fs::path& p, const char* what) {
    if (!fs::is_regular_file(p)) throw InvalidArgument(std::string(what) + " file not found: " + p.string());
  };
  need(asset_keywords, "asset keywords");
  need(stopwords, "stopwords");
  need(security_keywords, "security keywords");
  need(taxonomy_rules, "taxonomy rules");
  try {
    filter::AssetKeywordSet::load(asset_keywords);
    corpus::StopwordList::load(stopwords);
    if (filter::SecurityKeywordSet::load(security_keywords).keywords.empty())
      throw InvalidArgument("security keyword file is empty: " + security_keywords.string());
    if (ioc::load_taxonomy_rules(taxonomy_rules).empty())
      throw InvalidArgument("taxonomy rule file is empty: " + taxonomy_rules.string());
  } catch (const ParseError& e) {
    throw InvalidArgument(e.what());
  }
  clustering.validate();
}

nlohmann::json to_json(const PipelineConfig& c) {
  nlohmann::json j = {{"asset_keywords", c.asset_keywords.string()},
                      {"stopwords", c.stopwords.string()},
                      {"security_keywords", c.security_keywords.string()},
                      {"taxonomy_rules", c.taxonomy_rules.string()},
                      {"model_dir", c.model_dir.string()},
                      {"state_dir", c.state_dir.string()},
                      {"listen", c.listen},
                      {"feature_dimension", c.feature_dimension},
                      {"classifier", classify::to_json(c.classifier)},
                      {"clustering", cluster::to_json(c.clustering)},
                      {"offline_mode", to_string(c.engine.mode)},
                      {"offline_batch", c.engine.offline_batch},
                      {"drop_hashtags", c.normalize.drop_hashtags},
                      {"bootstrap", c.bootstrap},
                      {"snapshot_every", c.snapshot_every}};
  if (!c.input.empty()) j["input"] = c.input.string();
  j["retrain_horizon_days"] = c.retrain_horizon_days ? nlohmann::json(*c.retrain_horizon_days) : nlohmann::json();
  return j;
}

PipelineConfig load_config_from_environment(const std::optional<fs::path>& explicit_path) {
  std::optional<fs::path> path = explicit_path;
  if (!path) {
    if (const char* env = std::getenv("THREATWATCH_CONFIG"); env && *env) path = env;
  }
  auto c = path ? PipelineConfig::load(*path) : PipelineConfig::defaults();
  if (const char* addr = std::getenv("THREATWATCH_ADDR"); addr && *addr) c.listen = addr;
  return c;
}

}  // namespace threatwatch::service
