#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "threatwatch/cluster/cluster.hpp"
#include "threatwatch/ioc/taxonomy.hpp"

namespace threatwatch::ioc {

struct MispAttribute {
  std::string uuid;
  std::string type;
  std::string category;
  std::string object_relation;
  std::string value;

  bool operator==(const MispAttribute&) const = default;
};

struct MispObject {
  std::string name;
  std::string meta_category;
  std::string template_uuid;
  int template_version = 1;
  std::string uuid;
  std::vector<MispAttribute> attributes;

  /// Values of every attribute with the given relation, in order.
  std::vector<std::string> values(const std::string& relation) const;

  bool operator==(const MispObject&) const = default;
};

/// One event per cluster: an "osint" object with the exemplar and its links,
/// and a "cluster-analysis" object describing the remaining members.
struct MispEvent {
  std::string uuid;
  std::string info;
  /// "YYYY-MM-DD" of the earliest member.
  std::string date;
  /// Unix seconds of the latest member.
  std::int64_t timestamp = 0;
  std::set<std::string> tags;
  std::vector<MispObject> objects;

  const MispObject& object(const std::string& name) const;

  bool operator==(const MispEvent&) const = default;
};

inline const std::string kOsintObject = "osint";
inline const std::string kClusterObject = "cluster-analysis";

/// http(s) links in order of appearance, trailing punctuation removed.
std::vector<std::string> extract_urls(const std::string& text);

/// Identifiers are name-based, so regenerating an event for the same cluster
/// keeps its uuids. Throws InvalidArgument when rules are empty.
MispEvent generate_ioc(const cluster::Cluster& cluster, const TaxonomyRules& rules);

/// MISP core format: {"Event": {...}}.
nlohmann::json to_json(const MispEvent& event);
/// Throws ParseError.
MispEvent misp_event_from_json(const nlohmann::json& j);

}  // namespace threatwatch::ioc
