#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace threatwatch {

/// Event time of a post. Millisecond precision, UTC.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Duration = std::chrono::milliseconds;

/// Parses an RFC 3339 date-time ("2016-06-10T08:15:00Z", "...+02:00",
/// optional fractional seconds). Throws ParseError on malformed input.
Timestamp parse_rfc3339(std::string_view text);

/// Formats as UTC RFC 3339. Milliseconds are emitted only when non-zero.
std::string format_rfc3339(Timestamp ts);

/// "YYYY-MM-DD" of the UTC calendar day containing ts.
std::string format_date(Timestamp ts);

std::chrono::sys_days utc_day(Timestamp ts);

inline constexpr Duration days(long n) { return std::chrono::duration_cast<Duration>(std::chrono::days{n}); }

}  // namespace threatwatch
