#include "threatwatch/service/http_api.hpp"

#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace threatwatch::service {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, {{"error", message}}, status);
}

std::optional<cluster::ClusterId> parse_id(const std::string& s) {
  cluster::ClusterId id{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return id;
}

json post_json(const cluster::ClusteredPost& p) {
  return {{"post_id", p.post_id}, {"text", p.original_text}, {"timestamp", format_rfc3339(p.timestamp)}};
}

}  // namespace

json cluster_summary_json(const Pipeline& pipeline, const cluster::Cluster& c) {
  json j = {{"id", c.id()},
            {"size", c.size()},
            {"wts", c.wts()},
            {"created_at", format_rfc3339(c.created_at())},
            {"last_update", format_rfc3339(c.last_update())},
            {"exemplar", post_json(*c.exemplar())},
            {"tags", json::array()}};
  if (auto it = pipeline.iocs().find(c.id()); it != pipeline.iocs().end()) {
    j["ioc_uuid"] = it->second.uuid;
    j["tags"] = it->second.tags;
  }
  return j;
}

json cluster_detail_json(const Pipeline& pipeline, const cluster::Cluster& c) {
  auto j = cluster_summary_json(pipeline, c);
  json members = json::array();
  for (const auto& m : c.members()) members.push_back(post_json(*m));
  j["members"] = std::move(members);
  j["shared_words"] = c.shared_words();
  return j;
}

std::pair<std::string, int> parse_listen_address(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0) throw InvalidArgument("listen address must be host:port, got '" + addr + "'");
  int port = 0;
  const auto digits = addr.substr(colon + 1);
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || end != digits.data() + digits.size() || port < 0 || port > 65535)
    throw InvalidArgument("bad port in '" + addr + "'");
  return {addr.substr(0, colon), port};
}

struct HttpApi::Impl {
  Runtime& rt;
  httplib::Server server;

  explicit Impl(Runtime& r) : rt(r) { routes(); }

  void routes();
};

void HttpApi::Impl::routes() {
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const NotFound& e) {
      send_error(res, 404, e.what());
    } catch (const Busy& e) {
      send_error(res, 409, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, e.what());
    } catch (const ParseError& e) {
      send_error(res, 400, e.what());
    } catch (const InvalidArgument& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      spdlog::error("request failed: {}", e.what());
      send_error(res, 500, e.what());
    }
  });

  server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, rt.read([](const Pipeline& p, const LabelStore& labels) {
      const auto clock = p.engine().clock();
      return json{{"status", "ok"},
                  {"processed", p.processed()},
                  {"active_clusters", p.engine().state().size()},
                  {"labels", labels.size()},
                  {"model_version", p.models() ? json(p.models()->version) : json(nullptr)},
                  {"clock", clock ? json(format_rfc3339(*clock)) : json(nullptr)}};
    }));
  });

  server.Get("/clusters", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, rt.read([](const Pipeline& p, const LabelStore&) {
      json out = json::array();
      for (const auto& [id, c] : p.engine().state().clusters()) out.push_back(cluster_summary_json(p, c));
      return out;
    }));
  });

  server.Get(R"(/clusters/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto id = parse_id(req.matches[1]);
    if (!id) return send_error(res, 400, "cluster id must be a non-negative integer");
    auto body = rt.read([&](const Pipeline& p, const LabelStore&) -> std::optional<json> {
      const auto& clusters = p.engine().state().clusters();
      if (auto it = clusters.find(*id); it != clusters.end()) {
        auto j = cluster_detail_json(p, it->second);
        j["state"] = "active";
        return j;
      }
      for (const auto& c : p.engine().archive()) {
        if (c.id() != *id) continue;
        auto j = cluster_detail_json(p, c);
        j["state"] = "archived";
        return j;
      }
      return std::nullopt;
    });
    if (!body) return send_error(res, 404, "no cluster " + std::string(req.matches[1]));
    send_json(res, *body);
  });

  server.Get("/iocs", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, rt.read([](const Pipeline& p, const LabelStore&) {
      json out = json::array();
      for (const auto& [id, e] : p.iocs()) out.push_back(ioc::to_json(e));
      return out;
    }));
  });

  server.Get(R"(/iocs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto id = parse_id(req.matches[1]);
    if (!id) return send_error(res, 400, "cluster id must be a non-negative integer");
    auto event = rt.read([&](const Pipeline& p, const LabelStore&) { return p.ioc(*id); });
    if (!event) return send_error(res, 404, "no IoC for cluster " + std::string(req.matches[1]));
    send_json(res, ioc::to_json(*event));
  });

  server.Get("/metrics/daily", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, rt.read([](const Pipeline& p, const LabelStore&) {
      const auto rows = p.daily_metrics();
      return to_json(std::span<const DailyClusterMetrics>(rows));
    }));
  });

  server.Get("/reports/reduction", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, rt.read([](const Pipeline& p, const LabelStore&) { return p.reduction().to_json(); }));
  });

  server.Get("/reports/durations", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, rt.read([](const Pipeline& p, const LabelStore&) { return p.durations().to_json(); }));
  });

  server.Post("/posts", [this](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    std::vector<corpus::Post> posts;
    if (body.is_array()) {
      for (const auto& j : body) posts.push_back(corpus::post_from_json(j));
    } else {
      posts.push_back(corpus::post_from_json(body));
    }
    json out = json::array();
    for (const auto& post : posts) {
      const auto r = rt.ingest(post);
      json item = {{"post_id", r.post.id}, {"stage", to_string(r.stage)}};
      if (r.score) item["score"] = *r.score;
      if (r.outcome) item["outcome"] = to_string(*r.outcome);
      if (r.cluster) item["cluster"] = *r.cluster;
      out.push_back(std::move(item));
    }
    send_json(res, out);
  });

  server.Post("/labels", [this](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    if (!body.is_object()) return send_error(res, 400, "label body must be an object");
    const auto post_id = body.at("post_id").get<std::string>();
    if (post_id.empty()) return send_error(res, 400, "post_id must not be empty");
    const auto label = classify::label_from_string(body.at("label").get<std::string>());
    const auto source =
        body.contains("source") ? label_source_from_string(body["source"].get<std::string>()) : LabelSource::Analyst;
    std::optional<std::string> text;
    std::optional<Timestamp> posted_at;
    if (body.contains("text")) text = body["text"].get<std::string>();
    if (body.contains("timestamp")) posted_at = parse_rfc3339(body["timestamp"].get<std::string>());
    const auto [result, record] = rt.label(post_id, label, source, text, posted_at);
    const int status = result == PutResult::Created ? 201 : result == PutResult::Updated ? 200 : 409;
    send_json(res, to_json(record), status);
  });

  server.Get("/labels/queue", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t limit = 50;
    if (req.has_param("limit")) {
      const auto s = req.get_param_value("limit");
      auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), limit);
      if (ec != std::errc() || end != s.data() + s.size()) return send_error(res, 400, "limit must be an integer");
    }
    send_json(res, rt.read([&](const Pipeline& p, const LabelStore& labels) {
      json out = json::array();
      for (const auto& q : p.label_queue(labels, limit)) out.push_back(to_json(q));
      return out;
    }));
  });

  server.Get("/labels", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, rt.read([](const Pipeline&, const LabelStore& labels) {
      json out = json::array();
      for (const auto& r : labels.current()) out.push_back(to_json(r));
      return out;
    }));
  });

  server.Get(R"(/labels/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto r = rt.read([&](const Pipeline&, const LabelStore& labels) { return labels.get(id); });
    if (!r) return send_error(res, 404, "no label for post " + id);
    send_json(res, to_json(*r));
  });

  server.Post("/retrain", [this](const httplib::Request& req, httplib::Response& res) {
    const bool wait = req.has_param("wait") && req.get_param_value("wait") == "true";
    if (!wait) return send_json(res, to_json(rt.retrain(false)), 202);
    try {
      send_json(res, to_json(rt.retrain(true)));
    } catch (const Busy&) {
      throw;
    } catch (const std::exception&) {
      send_json(res, to_json(rt.retrain_status()), 422);
    }
  });

  server.Get("/retrain", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, to_json(rt.retrain_status()));
  });

  server.Get("/keywords", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, rt.read([](const Pipeline& p, const LabelStore&) { return json(p.asset_keywords().keywords()); }));
  });

  server.Delete(R"(/keywords/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, to_json(rt.remove_asset_keyword(req.matches[1])));
    } catch (const NotFound&) {
      throw;
    } catch (const InvalidArgument&) {
      throw;
    } catch (const std::exception&) {
      send_json(res, to_json(rt.retrain_status()), 422);
    }
  });
}

HttpApi::HttpApi(Runtime& runtime) : impl_(std::make_unique<Impl>(runtime)) {}
HttpApi::~HttpApi() = default;

bool HttpApi::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int HttpApi::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpApi::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpApi::stop() { impl_->server.stop(); }
void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace threatwatch::service
