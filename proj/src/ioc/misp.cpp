#include "threatwatch/ioc/misp.hpp"

#include <algorithm>
#include <regex>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/time.hpp"
#include "threatwatch/ioc/uuid.hpp"

namespace threatwatch::ioc {
namespace {

const std::string kOsintTemplate = "178eddb9-4cc0-515d-a382-7640dffff1cf";
const std::string kClusterTemplate = "7d220a8e-2131-5cc8-adf5-97b4b1ab61e2";

std::string derived_uuid(const std::string& name) { return format_uuid(uuid_v5(threatwatch_namespace(), name)); }

void add_attribute(MispObject& obj, std::string type, std::string category, std::string relation, std::string value) {
  MispAttribute a;
  a.uuid = derived_uuid(obj.uuid + "/" + std::to_string(obj.attributes.size()) + "/" + relation);
  a.type = std::move(type);
  a.category = std::move(category);
  a.object_relation = std::move(relation);
  a.value = std::move(value);
  obj.attributes.push_back(std::move(a));
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("MISP JSON: missing ") + key);
  return j.at(key);
}

std::string str(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw ParseError(std::string("MISP JSON: ") + key + " must be a string");
  return v.get<std::string>();
}

}  // namespace

std::vector<std::string> MispObject::values(const std::string& relation) const {
  std::vector<std::string> out;
  for (const auto& a : attributes) {
    if (a.object_relation == relation) out.push_back(a.value);
  }
  return out;
}

const MispObject& MispEvent::object(const std::string& name) const {
  for (const auto& o : objects) {
    if (o.name == name) return o;
  }
  throw InvalidArgument("event has no object " + name);
}

std::vector<std::string> extract_urls(const std::string& text) {
  static const std::regex url(R"(https?://[^\s<>"']+)", std::regex::icase);
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), url); it != std::sregex_iterator(); ++it) {
    std::string u = it->str();
    while (!u.empty() && std::string_view(".,;:!?)]}").find(u.back()) != std::string_view::npos) u.pop_back();
    out.push_back(u);
  }
  return out;
}

MispEvent generate_ioc(const cluster::Cluster& c, const TaxonomyRules& rules) {
  const auto exemplar = c.exemplar();
  if (!exemplar) throw InvalidArgument("cluster has no exemplar");
  const std::string text = exemplar->original_text.empty() ? exemplar->post_id : exemplar->original_text;

  MispEvent ev;
  ev.uuid = derived_uuid("event/" + std::to_string(c.id()) + "/" + format_rfc3339(c.created_at()));
  ev.info = text;
  ev.date = format_date(c.created_at());
  ev.timestamp = std::chrono::duration_cast<std::chrono::seconds>(c.last_update().time_since_epoch()).count();
  ev.tags = classify_tags(text, rules);

  MispObject osint;
  osint.name = kOsintObject;
  osint.meta_category = "misc";
  osint.template_uuid = kOsintTemplate;
  osint.uuid = derived_uuid(ev.uuid + "/" + kOsintObject);
  add_attribute(osint, "text", "External analysis", "message", text);
  add_attribute(osint, "text", "Other", "post-id", exemplar->post_id);
  for (auto& link : extract_urls(text)) add_attribute(osint, "link", "External analysis", "link", std::move(link));

  MispObject analysis;
  analysis.name = kClusterObject;
  analysis.meta_category = "misc";
  analysis.template_uuid = kClusterTemplate;
  analysis.uuid = derived_uuid(ev.uuid + "/" + kClusterObject);
  add_attribute(analysis, "text", "Other", "cluster-id", std::to_string(c.id()));
  add_attribute(analysis, "counter", "Other", "member-count", std::to_string(c.size()));
  add_attribute(analysis, "datetime", "Other", "first-seen", format_rfc3339(c.created_at()));
  add_attribute(analysis, "datetime", "Other", "last-seen", format_rfc3339(c.last_update()));
  std::vector<cluster::PostPtr> others;
  for (const auto& m : c.members()) {
    if (m != exemplar) others.push_back(m);
  }
  std::sort(others.begin(), others.end(), [](const auto& a, const auto& b) { return cluster::earlier(*a, *b); });
  for (const auto& m : others)
    add_attribute(analysis, "text", "External analysis", "member-text", m->original_text.empty() ? m->post_id : m->original_text);

  ev.objects = {std::move(osint), std::move(analysis)};
  return ev;
}

nlohmann::json to_json(const MispEvent& ev) {
  nlohmann::json tags = nlohmann::json::array();
  for (const auto& t : ev.tags) tags.push_back({{"name", t}});
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : ev.objects) {
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& a : o.attributes) {
      attrs.push_back({{"uuid", a.uuid},
                       {"type", a.type},
                       {"category", a.category},
                       {"object_relation", a.object_relation},
                       {"value", a.value},
                       {"to_ids", false},
                       {"distribution", "5"}});
    }
    objects.push_back({{"name", o.name},
                       {"meta-category", o.meta_category},
                       {"template_uuid", o.template_uuid},
                       {"template_version", std::to_string(o.template_version)},
                       {"uuid", o.uuid},
                       {"distribution", "5"},
                       {"Attribute", attrs}});
  }
  return {{"Event",
           {{"uuid", ev.uuid},
            {"info", ev.info},
            {"date", ev.date},
            {"timestamp", std::to_string(ev.timestamp)},
            {"threat_level_id", "4"},
            {"analysis", "0"},
            {"distribution", "0"},
            {"published", false},
            {"Tag", tags},
            {"Object", objects}}}};
}

MispEvent misp_event_from_json(const nlohmann::json& j) {
  const auto& e = field(j, "Event");
  MispEvent ev;
  ev.uuid = str(e, "uuid");
  ev.info = str(e, "info");
  ev.date = str(e, "date");
  try {
    ev.timestamp = std::stoll(str(e, "timestamp"));
  } catch (const std::logic_error&) {
    throw ParseError("MISP JSON: bad timestamp");
  }
  for (const auto& t : field(e, "Tag")) ev.tags.insert(str(t, "name"));
  for (const auto& o : field(e, "Object")) {
    MispObject obj;
    obj.name = str(o, "name");
    obj.meta_category = str(o, "meta-category");
    obj.template_uuid = str(o, "template_uuid");
    try {
      obj.template_version = std::stoi(str(o, "template_version"));
    } catch (const std::logic_error&) {
      throw ParseError("MISP JSON: bad template_version");
    }
    obj.uuid = str(o, "uuid");
    for (const auto& a : field(o, "Attribute"))
      obj.attributes.push_back({str(a, "uuid"), str(a, "type"), str(a, "category"), str(a, "object_relation"), str(a, "value")});
    ev.objects.push_back(std::move(obj));
  }
  return ev;
}

}  // namespace threatwatch::ioc
