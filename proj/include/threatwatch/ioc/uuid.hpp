#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace threatwatch::ioc {

using Uuid = std::array<std::uint8_t, 16>;

/// Parses the canonical 8-4-4-4-12 hex form. Throws ParseError.
Uuid parse_uuid(std::string_view text);
std::string format_uuid(const Uuid& id);

/// Name-based UUID (RFC 4122 version 5, SHA-1).
Uuid uuid_v5(const Uuid& name_space, std::string_view name);

/// Namespace for every identifier this project derives.
const Uuid& threatwatch_namespace();

}  // namespace threatwatch::ioc
