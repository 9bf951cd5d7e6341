#pragma once

#include <memory>
#include <string>

#include "threatwatch/service/runtime.hpp"

namespace threatwatch::service {

/// JSON API over a Runtime. Reads take the runtime's shared lock once per
/// request, so a response never mixes states from before and after a merge.
class HttpApi {
 public:
  explicit HttpApi(Runtime& runtime);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  /// Blocks until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; throws InvalidArgument.
std::pair<std::string, int> parse_listen_address(const std::string& addr);

nlohmann::json cluster_summary_json(const Pipeline& pipeline, const cluster::Cluster& c);
nlohmann::json cluster_detail_json(const Pipeline& pipeline, const cluster::Cluster& c);

}  // namespace threatwatch::service
