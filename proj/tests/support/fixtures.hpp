#pragma once

// Small builders shared by the unit and acceptance tests.

#include <memory>
#include <string>
#include <vector>

#include "threatwatch/cluster/cluster.hpp"
#include "threatwatch/common/time.hpp"
#include "threatwatch/corpus/normalize.hpp"
#include "threatwatch/features/tfidf.hpp"

namespace threatwatch::testing {

/// Near-duplicate advisory tweets forming one cluster, exemplar first.
inline const std::vector<std::string>& cisco_cluster_texts() {
  static const std::vector<std::string> texts = {
      "Bugtraq: Cisco Security Advisory: Cisco Web Security Appliance HTTP POST Denial of Service Vulnerability "
      "https://t.co/6FXInr9hNh",
      "Bugtraq: Cisco Security Advisory: Cisco Web Security Appliance HTTP POST Denial of Service Vulnerability "
      "https://t.co/6FXInr9hNh",
      "Bugtraq: Cisco Security Advisory: Cisco Web Security Appliance HTTP Length Denial of Service Vulnerability "
      "https://t.co/TgU0T9vlZt #bugtraq",
      "Bugtraq: Cisco Security Advisory: Cisco Web Security Appliance HTTP POST Denial of Service Vulnerability "
      "https://t.co/feZlTxQKVC #bugtraq",
      "#cybersecurity Bugtraq: Cisco Security Advisory: Cisco Web Security Appliance HTTP POST Denial of Service "
      "https://t.co/XUUctUnQ8F #infosec",
      "#vulnerability #security : Bugtraq: Cisco Security Advisory: Cisco Web Security Appliance HTTP POST Denial of "
      "Serv https://t.co/9bW0ls00kx",
      "#internet #security: Cisco Web Security Appliance HTTP POST Denial of Service Vulnerability "
      "https://t.co/cXQUTWUBbD",
  };
  return texts;
}

/// TF-IDF model with every idf weight 1, so vectors are raw hashed counts.
inline features::TfIdfModel unit_idf_model(std::uint32_t dim = 3000) {
  return features::TfIdfModel(dim, features::kDefaultHashSeed, 1, std::vector<double>(dim, 1.0));
}

inline cluster::PostPtr make_post(const std::string& id, const std::vector<std::string>& tokens, Timestamp ts,
                                  const features::TfIdfModel& model, std::string text = {}) {
  auto p = std::make_shared<cluster::ClusteredPost>();
  p->post_id = id;
  p->token_set = corpus::distinct_sorted(tokens);
  p->vector = model.transform(tokens);
  p->timestamp = ts;
  p->original_text = text;
  return p;
}

inline cluster::PostPtr make_post(const std::string& id, const std::vector<std::string>& tokens, Timestamp ts) {
  static const auto model = unit_idf_model();
  return make_post(id, tokens, ts, model);
}

inline cluster::PostPtr post_from_text(const std::string& id, const std::string& text, Timestamp ts,
                                       const features::TfIdfModel& model,
                                       const corpus::NormalizeOptions& options = {}) {
  auto tokens = corpus::normalize_text(text, corpus::StopwordList::bundled(), options);
  return make_post(id, tokens, ts, model, text);
}

inline std::vector<std::string> words(const std::string& spaced) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : spaced + " ") {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

inline Timestamp t0() { return parse_rfc3339("2016-06-01T00:00:00Z"); }

}  // namespace threatwatch::testing
