#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace iqb {

// Instants are UTC microseconds since the Unix epoch.
using Instant = std::int64_t;

// Parses an RFC 3339 timestamp ("2025-06-01T12:34:56Z", optional fractional
// seconds, "Z" or a +hh:mm / -hh:mm offset). Returns nullopt on malformed
// input or out-of-range fields.
std::optional<Instant> parse_rfc3339(std::string_view text);

// Formats an instant as UTC RFC 3339 with second precision; microseconds are
// appended only when nonzero.
std::string format_rfc3339(Instant t);

// Current wall-clock time.
Instant now_utc();

// Half-open is the wrong model for human-specified windows; both ends are
// inclusive.
struct TimeWindow {
  Instant start = 0;
  Instant end = 0;

  bool contains(Instant t) const { return t >= start && t <= end; }
};

// Parses "start..end" where both ends are RFC 3339 timestamps.
std::optional<TimeWindow> parse_time_window(std::string_view text);

}  // namespace iqb
