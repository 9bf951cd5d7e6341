#include "threatwatch/ioc/schema.hpp"

#include <regex>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/text_io.hpp"

namespace threatwatch::ioc {
namespace {

bool has_type(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    return v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>()));
  }
  throw InvalidArgument("schema: unknown type " + type);
}

// Characters, not UTF-8 bytes, as the draft counts them.
std::size_t code_points(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

}  // namespace

SchemaValidator::SchemaValidator(nlohmann::json schema) : root_(std::move(schema)) {
  if (!root_.is_object() && !root_.is_boolean()) throw InvalidArgument("schema must be an object or boolean");
}

SchemaValidator SchemaValidator::load(const std::filesystem::path& path) {
  try {
    return SchemaValidator(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

const nlohmann::json& SchemaValidator::resolve(const std::string& ref) const {
  if (ref.empty() || ref[0] != '#') throw InvalidArgument("schema: only local $ref is supported: " + ref);
  try {
    return root_.at(nlohmann::json::json_pointer(ref.substr(1)));
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument("schema: unresolved $ref " + ref);
  }
}

std::vector<std::string> SchemaValidator::validate(const nlohmann::json& instance) const {
  std::vector<std::string> errors;
  check(root_, instance, "", errors);
  return errors;
}

void SchemaValidator::check(const nlohmann::json& s, const nlohmann::json& v, const std::string& where,
                            std::vector<std::string>& errors) const {
  auto fail = [&](const std::string& msg) { errors.push_back((where.empty() ? "/" : where) + ": " + msg); };
  if (s.is_boolean()) {
    if (!s.get<bool>()) fail("no value allowed");
    return;
  }
  if (s.contains("$ref")) {
    // Draft-07: $ref overrides its sibling keywords.
    check(resolve(s["$ref"].get<std::string>()), v, where, errors);
    return;
  }
  if (s.contains("type")) {
    const auto& t = s["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(v, t.get<std::string>());
    } else {
      for (const auto& one : t) ok = ok || has_type(v, one.get<std::string>());
    }
    if (!ok) {
      fail("expected type " + t.dump());
      return;
    }
  }
  if (s.contains("enum")) {
    const auto& e = s["enum"];
    if (std::find(e.begin(), e.end(), v) == e.end()) fail("value " + v.dump() + " not in enum");
  }
  if (s.contains("const") && v != s["const"]) fail("expected " + s["const"].dump());

  if (v.is_string()) {
    const auto& str = v.get_ref<const std::string&>();
    if (s.contains("minLength") && code_points(str) < s["minLength"].get<std::size_t>()) fail("string too short");
    if (s.contains("maxLength") && code_points(str) > s["maxLength"].get<std::size_t>()) fail("string too long");
    if (s.contains("pattern")) {
      std::regex re(s["pattern"].get<std::string>(), std::regex::ECMAScript);
      if (!std::regex_search(str, re)) fail("does not match " + s["pattern"].get<std::string>());
    }
  }
  if (v.is_number()) {
    if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>()) fail("below minimum");
    if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>()) fail("above maximum");
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto& key : s["required"]) {
        if (!v.contains(key.get<std::string>())) fail("missing required property " + key.get<std::string>());
      }
    }
    const nlohmann::json empty = nlohmann::json::object();
    const auto& props = s.contains("properties") ? s["properties"] : empty;
    for (const auto& [key, child] : v.items()) {
      const std::string path = where + "/" + escape_pointer(key);
      if (props.contains(key)) {
        check(props[key], child, path, errors);
      } else if (s.contains("additionalProperties")) {
        check(s["additionalProperties"], child, path, errors);
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) fail("too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) fail("too many items");
    if (s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], where + "/" + std::to_string(i), errors);
    }
    if (s.contains("contains")) {
      bool found = false;
      for (const auto& item : v) {
        std::vector<std::string> sub;
        check(s["contains"], item, where, sub);
        if (sub.empty()) {
          found = true;
          break;
        }
      }
      if (!found) fail("no item matches the contains schema");
    }
  }
}

const SchemaValidator& misp_event_validator() {
  static const SchemaValidator v = SchemaValidator::load(bundled_schema_dir() / "misp-event.schema.json");
  return v;
}

}  // namespace threatwatch::ioc
