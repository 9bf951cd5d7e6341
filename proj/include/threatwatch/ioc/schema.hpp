#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace threatwatch::ioc {

/// Validator for the JSON Schema draft-07 keywords the bundled schemas use:
/// type, enum, const, properties, required, additionalProperties, items,
/// minItems, maxItems, contains, minLength, maxLength, pattern, minimum,
/// maximum and local "#/..." $ref. Unknown keywords are ignored, as the
/// draft requires.
class SchemaValidator {
 public:
  explicit SchemaValidator(nlohmann::json schema);
  static SchemaValidator load(const std::filesystem::path& path);

  /// One message per violation, prefixed with a JSON pointer; empty when valid.
  std::vector<std::string> validate(const nlohmann::json& instance) const;
  bool valid(const nlohmann::json& instance) const { return validate(instance).empty(); }

 private:
  void check(const nlohmann::json& schema, const nlohmann::json& instance, const std::string& where,
             std::vector<std::string>& errors) const;
  const nlohmann::json& resolve(const std::string& ref) const;

  nlohmann::json root_;
};

/// Validator for the pinned MISP event schema.
const SchemaValidator& misp_event_validator();

}  // namespace threatwatch::ioc
