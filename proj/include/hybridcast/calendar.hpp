#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace hybridcast {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DD`. Throws DataError on anything else.
Date parse_date(std::string_view text);

/// Parses ISO-8601 date-times such as `2024-03-01T14:30:00Z`,
/// `2024-03-01T14:30:00.123Z` or `2024-03-01T09:30:00-05:00`; result is UTC.
/// A bare date is accepted as midnight UTC.
Timestamp parse_timestamp(std::string_view text);

std::string format_date(Date date);

/// Always emits the `YYYY-MM-DDTHH:MM:SSZ` form.
std::string format_timestamp(Timestamp ts);

inline Date day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

inline bool is_weekday(Date date) {
  const std::chrono::weekday wd{date};
  return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

}  // namespace hybridcast
